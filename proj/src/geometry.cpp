#include "ib/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ib/rng.hpp"
#include "ib/detail/lp_builder.hpp"

namespace ib {

// ---------------------------------------------------------------------------
// NormSpec

bool NormSpec::polyhedral() const {
  switch (kind) {
    case Kind::L1:
    case Kind::LInf:
    case Kind::PolytopeHull:
      return true;
    case Kind::L2:
      return false;
    case Kind::MaxOfBlocks:
      return std::all_of(blocks.begin(), blocks.end(),
                         [](const auto& b) { return b.second.polyhedral(); });
  }
  return false;
}

namespace {
using detail::AffExpr;
using detail::LPBuilder;
using detail::LinExpr;
using detail::add_norm_epigraph;
using detail::gather;
using detail::norm_subgradient;
}  // namespace

double norm_eval(const NormSpec& n, const Vec& v) {
  switch (n.kind) {
    case NormSpec::Kind::L1:
      return v.lpNorm<1>();
    case NormSpec::Kind::L2:
      return v.norm();
    case NormSpec::Kind::LInf:
      return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
    case NormSpec::Kind::MaxOfBlocks: {
      double m = 0;
      for (const auto& [idx, sub] : n.blocks)
        m = std::max(m, norm_eval(sub, gather(v, idx)));
      return m;
    }
    case NormSpec::Kind::PolytopeHull: {
      if (v.size() != n.vertices.rows()) throw DimensionMismatch("norm_eval");
      LPBuilder B;
      std::vector<AffExpr> u(v.size());
      for (int i = 0; i < v.size(); ++i) u[(size_t)i].c0 = -v(i);  // expr = -v, so "=-u" means V c = v
      int s = B.add(0.0);
      // ||v|| <= s with v fixed: reuse the epigraph with constant expressions.
      add_norm_epigraph(B, n, u, s);
      auto sol = lp_solve(B.build({{s, 1.0}}, LPSense::Minimize));
      if (sol.status != LPStatus::Optimal)
        return std::numeric_limits<double>::infinity();  // v outside the span
      return std::max(0.0, sol.value);
    }
  }
  throw NoApplicableMethod("unknown norm");
}

double dual_norm_eval(const NormSpec& n, const Vec& v) {
  switch (n.kind) {
    case NormSpec::Kind::L1:
      return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
    case NormSpec::Kind::L2:
      return v.norm();
    case NormSpec::Kind::LInf:
      return v.lpNorm<1>();
    case NormSpec::Kind::MaxOfBlocks: {
      // Dual of a max of norms on complementary blocks: sum of block duals.
      double s = 0;
      for (const auto& [idx, sub] : n.blocks) s += dual_norm_eval(sub, gather(v, idx));
      return s;
    }
    case NormSpec::Kind::PolytopeHull: {
      double m = 0;
      for (int j = 0; j < n.vertices.cols(); ++j)
        m = std::max(m, std::abs(v.dot(n.vertices.col(j))));
      return m;
    }
  }
  throw NoApplicableMethod("unknown norm");
}

// ---------------------------------------------------------------------------
// AffineSubspace

AffineSubspace::AffineSubspace(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw DimensionMismatch("AffineSubspace");
  try {
    point_ = least_squares_min_norm(A_, b_);
    empty_ = false;
  } catch (const Inconsistent&) {
    point_ = Vec::Zero(A_.cols());
    empty_ = true;
  }
  kernel_ = kernel_basis(A_);
}

AffineSubspace AffineSubspace::from_point_basis(const Vec& point, const Mat& basis) {
  AffineSubspace s;
  const int d = (int)point.size();
  // Constraints: rows orthogonal to the basis.
  Mat K = basis.size() ? basis : Mat::Zero(d, 0);
  Mat comp = kernel_basis(K.transpose());  // d x (d-k), orthonormal
  s.A_ = comp.transpose();
  s.b_ = s.A_ * point;
  s.point_ = point;
  // Orthonormalize the basis.
  if (K.cols() > 0) {
    Eigen::HouseholderQR<Mat> qr(K);
    s.kernel_ = qr.householderQ() * Mat::Identity(d, K.cols());
  } else {
    s.kernel_ = Mat::Zero(d, 0);
  }
  s.empty_ = false;
  return s;
}

const Vec& AffineSubspace::point() const {
  if (empty_) throw EmptySubspace("affine subspace is empty");
  return point_;
}

bool AffineSubspace::contains(const Vec& y, double tol) const {
  if (empty_) return false;
  if (A_.rows() == 0) return true;
  return (A_ * y - b_).lpNorm<Eigen::Infinity>() <= tol;
}

AffineSubspace AffineSubspace::intersect(const AffineSubspace& o) const {
  Mat A(A_.rows() + o.A_.rows(), A_.cols());
  A << A_, o.A_;
  Vec b(b_.size() + o.b_.size());
  b << b_, o.b_;
  return AffineSubspace(std::move(A), std::move(b));
}

// ---------------------------------------------------------------------------
// ConvexBody

ConvexBody ConvexBody::polytope(Mat v) {
  ConvexBody b;
  b.kind = Kind::Polytope;
  b.verts = std::move(v);
  return b;
}
ConvexBody ConvexBody::simplex(int labels) {
  ConvexBody b;
  b.kind = Kind::SimplexOfLabels;
  b.labels = labels;
  return b;
}
ConvexBody ConvexBody::ball(int ball_dim, int mu_coord) {
  ConvexBody b;
  b.kind = Kind::Ball;
  b.ball_dim = ball_dim;
  b.mu_coord = mu_coord;
  return b;
}
ConvexBody ConvexBody::cone_ball(int D, double alpha) {
  ConvexBody b;
  b.kind = Kind::ConeBall;
  b.cone_D = D;
  b.cone_alpha = alpha;
  return b;
}
ConvexBody ConvexBody::cone_ball_flat(int D) {
  ConvexBody b;
  b.kind = Kind::ConeBall;
  b.cone_D = D;
  b.cone_flat = true;
  return b;
}
ConvexBody ConvexBody::segment(const Vec& a, const Vec& b2) {
  ConvexBody b;
  b.kind = Kind::Segment;
  b.verts = Mat(a.size(), 2);
  b.verts.col(0) = a;
  b.verts.col(1) = b2;
  return b;
}

int ConvexBody::dim() const {
  switch (kind) {
    case Kind::Polytope:
    case Kind::Segment:
      return (int)verts.rows();
    case Kind::SimplexOfLabels:
      return labels;
    case Kind::Ball:
      return ball_dim + 1;
    case Kind::ConeBall:
      return cone_flat ? cone_D + 1 : cone_D + 2;
  }
  return 0;
}

namespace {

// Deterministic unit vectors on S^{d-1}.
Mat sphere_points(int d, int count) {
  Mat out(d, count);
  if (d == 1) {
    out.resize(1, 2);
    out << 1, -1;
    return out;
  }
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 2 * M_PI * i / count;
      out(0, i) = std::cos(a);
      out(1, i) = std::sin(a);
    }
    return out;
  }
  Rng rng(0xC0FFEE);
  for (int i = 0; i < count; ++i) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v(j) = rng.normal();
    double n = v.norm();
    if (n < 1e-12) { v.setZero(); v(0) = 1; n = 1; }
    out.col(i) = v / n;
  }
  return out;
}

}  // namespace

Mat ConvexBody::ext_points(int resolution) const {
  switch (kind) {
    case Kind::Polytope:
    case Kind::Segment:
      return verts;
    case Kind::SimplexOfLabels:
      return Mat::Identity(labels, labels);
    case Kind::Ball: {
      Mat s = sphere_points(ball_dim, resolution);
      Mat out = Mat::Zero(ball_dim + 1, s.cols());
      for (int i = 0; i < s.cols(); ++i) {
        int k = 0;
        for (int j = 0; j < ball_dim + 1; ++j)
          out(j, i) = (j == mu_coord) ? 1.0 : s(k++, i);
      }
      return out;
    }
    case Kind::ConeBall: {
      Mat s = sphere_points(cone_D, resolution);
      if (cone_flat) {
        Mat out = Mat::Zero(cone_D + 1, s.cols() + 1);
        out(0, 0) = 1.0;  // apex
        for (int i = 0; i < s.cols(); ++i)
          out.block(1, i + 1, cone_D, 1) = s.col(i);  // base rim (t0 = 0)
        return out;
      }
      Mat out = Mat::Zero(cone_D + 2, s.cols() + 1);
      out(0, 0) = 1.0;  // apex y_perp = (1, 0, 0...)
      for (int i = 0; i < s.cols(); ++i) {
        out(1, i + 1) = 1.0;
        out.block(2, i + 1, cone_D, 1) = s.col(i);
      }
      return out;
    }
  }
  return {};
}

bool ConvexBody::contains(const Vec& y, double tol) const {
  switch (kind) {
    case Kind::SimplexOfLabels:
      return y.minCoeff() >= -tol && std::abs(y.sum() - 1) <= tol;
    case Kind::Ball: {
      if (std::abs(y(mu_coord) - 1) > tol) return false;
      double s = 0;
      for (int j = 0; j < y.size(); ++j)
        if (j != mu_coord) s += y(j) * y(j);
      return std::sqrt(s) <= 1 + tol;
    }
    case Kind::ConeBall: {
      if (cone_flat) {
        if (y(0) < -tol) return false;
        return y.tail(cone_D).norm() <= 1.0 - y(0) + tol;
      }
      if (std::abs(y(0) + y(1) - 1) > tol || y(0) < -tol) return false;
      return y.segment(2, cone_D).norm() <= y(1) + tol;
    }
    case Kind::Polytope:
    case Kind::Segment: {
      // Membership LP: y in conv(verts)?
      LPBuilder B;
      std::vector<int> lam(verts.cols());
      for (int j = 0; j < verts.cols(); ++j) lam[j] = B.add(0.0);
      for (int i = 0; i < verts.rows(); ++i) {
        LinExpr row;
        for (int j = 0; j < verts.cols(); ++j) row.push_back({lam[j], verts(i, j)});
        B.eq(row, y(i));
      }
      LinExpr sum;
      for (int j : lam) sum.push_back({j, 1.0});
      B.eq(sum, 1.0);
      auto sol = lp_solve(B.build({}, LPSense::Minimize));
      if (sol.status == LPStatus::Optimal) return true;
      // Tolerate boundary misses: check the L2 distance instead.
      NormSpec l2 = NormSpec::l2();
      return dist_point_to_body(l2, y, *this) <= tol;
    }
  }
  return false;
}

std::pair<Mat, Vec> ConvexBody::hull_constraints() const {
  const int d = dim();
  switch (kind) {
    case Kind::SimplexOfLabels: {
      Mat A = Mat::Ones(1, d);
      Vec b = Vec::Ones(1);
      return {A, b};
    }
    case Kind::Ball: {
      Mat A = Mat::Zero(1, d);
      A(0, mu_coord) = 1;
      return {A, Vec::Ones(1)};
    }
    case Kind::ConeBall: {
      if (cone_flat) return {Mat::Zero(0, d), Vec::Zero(0)};  // full-dimensional
      Mat A = Mat::Zero(1, d);
      A(0, 0) = A(0, 1) = 1;
      return {A, Vec::Ones(1)};
    }
    case Kind::Polytope:
    case Kind::Segment: {
      // Hull through verts.col(0) with directions verts.col(j)-verts.col(0).
      Mat D(d, verts.cols() - 1);
      for (int j = 1; j < verts.cols(); ++j) D.col(j - 1) = verts.col(j) - verts.col(0);
      Mat comp = kernel_basis(D.transpose());  // normals
      Mat A = comp.transpose();
      Vec b = A * verts.col(0);
      return {A, b};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// min-norm / distances

std::pair<Vec, double> min_norm_on_affine(const NormSpec& n, const AffineSubspace& S) {
  if (S.empty()) throw EmptySubspace("min_norm_on_affine");
  const Vec& y0 = S.point();
  const Mat& K = S.basis();
  if (n.kind == NormSpec::Kind::L2) {
    Vec y = y0 - K * (K.transpose() * y0);
    return {y, y.norm()};
  }
  if (n.polyhedral()) {
    LPBuilder B;
    std::vector<int> t(K.cols());
    for (size_t j = 0; j < t.size(); ++j) t[j] = B.add(std::nullopt);
    std::vector<AffExpr> u((size_t)y0.size());
    for (int i = 0; i < y0.size(); ++i) {
      u[(size_t)i].c0 = y0(i);
      for (size_t j = 0; j < t.size(); ++j)
        if (K(i, (int)j) != 0.0) u[(size_t)i].terms.push_back({t[j], K(i, (int)j)});
    }
    int s = B.add(0.0);
    add_norm_epigraph(B, n, u, s);
    auto sol = lp_solve(B.build({{s, 1.0}}, LPSense::Minimize));
    if (sol.status != LPStatus::Optimal)
      throw NumericalBreakdown("min_norm_on_affine LP failed");
    Vec y = y0;
    for (size_t j = 0; j < t.size(); ++j) y += sol.point(t[j]) * K.col((int)j);
    return {y, std::max(0.0, sol.value)};
  }
  // Mixed norms with L2 blocks: projected subgradient on the kernel
  // parametrization, step 1/k.
  Vec tcur = -(K.transpose() * y0);  // start at the l2 minimizer
  Vec tbest = tcur;
  double fbest = norm_eval(n, y0 + K * tcur);
  double scale = std::max(1.0, fbest);
  for (int k = 1; k <= 10000; ++k) {
    Vec u = y0 + K * tcur;
    double f = norm_eval(n, u);
    if (f < fbest) {
      fbest = f;
      tbest = tcur;
    }
    Vec g = K.transpose() * norm_subgradient(n, u);
    double gn = g.norm();
    if (gn < 1e-14) break;
    tcur -= (scale / k) * g / gn;
  }
  return {y0 + K * tbest, fbest};
}

double dist_point_to_affine(const NormSpec& n, const Vec& p, const AffineSubspace& S) {
  if (S.empty()) throw EmptySubspace("dist_point_to_affine");
  AffineSubspace T = AffineSubspace::from_point_basis(S.point() - p, S.basis());
  return min_norm_on_affine(n, T).second;
}

namespace {

// Frank-Wolfe minimization of ||p - q||_2 with p in conv(P), q in conv(Q).
double fw_polytope_distance(const Mat& P, const Mat& Q) {
  Vec p = P.col(0), q = Q.col(0);
  for (int it = 0; it < 100000; ++it) {
    Vec d = p - q;
    // LMO: best vertices for the linearized objective.
    int ip = 0, iq = 0;
    (d.transpose() * P).minCoeff(&ip);
    (d.transpose() * Q).maxCoeff(&iq);
    Vec dp = P.col(ip) - p, dq = Q.col(iq) - q;
    double gap = -d.dot(dp) + d.dot(dq);  // FW duality gap
    if (gap <= 0.5 * tols().tol_opt * tols().tol_opt) break;
    Vec delta = dp - dq;
    double den = delta.squaredNorm();
    if (den < 1e-18) break;
    double gamma = std::clamp(-d.dot(delta) / den, 0.0, 1.0);
    p += gamma * dp;
    q += gamma * dq;
  }
  return (p - q).norm();
}

// L2 projection onto the capped cone {t : t0 >= 0, ||t_1:|| <= 1 - t0}
// expressed in flat coordinates (the lower-s proof's rescaled metric).
Vec project_flat_cone(const Vec& t) {
  const int D = (int)t.size() - 1;
  double s = 1.0 - t(0);  // cone coordinate: ||tail|| <= s, s <= 1
  Vec tail = t.tail(D);
  double r = tail.norm();
  // Project (s, tail) onto the SOC {||tail|| <= s}.
  double ps, pr;
  if (r <= s) {
    ps = s;
    pr = r;
  } else if (r <= -s) {
    ps = 0;
    pr = 0;
  } else {
    double m = (s + r) / 2;
    ps = m;
    pr = m;
  }
  if (ps > 1.0) {
    // Outside the cap: project onto the base disk {s = 1, ||tail|| <= 1}.
    ps = 1.0;
    pr = std::min(r, 1.0);
  }
  Vec out(t.size());
  out(0) = 1.0 - ps;
  if (r > 1e-15)
    out.tail(D) = tail * (pr / r);
  else
    out.tail(D).setZero();
  return out;
}

Vec project_affine(const AffineSubspace& S, const Vec& x) {
  const Vec& q = S.point();
  return q + S.basis() * (S.basis().transpose() * (x - q));
}

}  // namespace

double dist_between_convex(const NormSpec& n, const ConvexBody& P, const ConvexBody& Q) {
  if (!P.is_polytope_like() || !Q.is_polytope_like())
    throw UnsupportedBody("dist_between_convex supports polytopes only");
  Mat VP = P.ext_points(), VQ = Q.ext_points();
  if (n.kind == NormSpec::Kind::L2) return fw_polytope_distance(VP, VQ);
  if (!n.polyhedral()) throw NoApplicableMethod("dist_between_convex norm");
  LPBuilder B;
  std::vector<int> lam(VP.cols()), mu(VQ.cols());
  for (auto& v : lam) v = B.add(0.0);
  for (auto& v : mu) v = B.add(0.0);
  LinExpr s1, s2;
  for (int j : lam) s1.push_back({j, 1.0});
  for (int j : mu) s2.push_back({j, 1.0});
  B.eq(s1, 1.0);
  B.eq(s2, 1.0);
  std::vector<AffExpr> u((size_t)VP.rows());
  for (int i = 0; i < VP.rows(); ++i) {
    for (int j = 0; j < VP.cols(); ++j)
      if (VP(i, j) != 0) u[(size_t)i].terms.push_back({lam[(size_t)j], VP(i, j)});
    for (int j = 0; j < VQ.cols(); ++j)
      if (VQ(i, j) != 0) u[(size_t)i].terms.push_back({mu[(size_t)j], -VQ(i, j)});
  }
  int s = B.add(0.0);
  add_norm_epigraph(B, n, u, s);
  auto sol = lp_solve(B.build({{s, 1.0}}, LPSense::Minimize));
  if (sol.status != LPStatus::Optimal)
    throw NumericalBreakdown("dist_between_convex LP failed");
  return std::max(0.0, sol.value);
}

double dist_point_to_body(const NormSpec& n, const Vec& p, const ConvexBody& D) {
  if (D.is_polytope_like()) {
    if (n.kind == NormSpec::Kind::L2) {
      Mat P(p.size(), 1);
      P.col(0) = p;
      return fw_polytope_distance(P, D.ext_points());
    }
    if (!n.polyhedral()) throw NoApplicableMethod("dist_point_to_body norm");
    ConvexBody single = ConvexBody::polytope(p);
    return dist_between_convex(n, single, D);
  }
  if (n.kind == NormSpec::Kind::L2) {
    if (D.kind == ConvexBody::Kind::Ball) {
      Vec q = p;
      q(D.mu_coord) = 1.0;
      double r2 = 0;
      for (int j = 0; j < q.size(); ++j)
        if (j != D.mu_coord) r2 += q(j) * q(j);
      double r = std::sqrt(r2);
      if (r > 1) {
        double f = 1.0 / r;
        for (int j = 0; j < q.size(); ++j)
          if (j != D.mu_coord) q(j) *= f;
      }
      return (p - q).norm();
    }
    if (D.kind == ConvexBody::Kind::ConeBall) {
      // Exact only for points in the hull plane y0+y1=1 (where it is used).
      throw NoApplicableMethod("L2 distance to embedded cone not supported");
    }
  }
  throw NoApplicableMethod("dist_point_to_body");
}

double dist_point_to_section(const NormSpec& n, const Vec& p,
                             const AffineSubspace& S, const ConvexBody& D) {
  if (D.is_polytope_like() && n.polyhedral()) {
    Mat V = D.ext_points();
    LPBuilder B;
    std::vector<int> lam(V.cols());
    for (auto& v : lam) v = B.add(0.0);
    LinExpr sum;
    for (int j : lam) sum.push_back({j, 1.0});
    B.eq(sum, 1.0);
    // Subspace constraints on y = V lambda.
    for (int r = 0; r < S.A().rows(); ++r) {
      LinExpr row;
      for (int j = 0; j < V.cols(); ++j) {
        double c = S.A().row(r) * V.col(j);
        if (c != 0) row.push_back({lam[(size_t)j], c});
      }
      B.eq(row, S.b()(r));
    }
    std::vector<AffExpr> u((size_t)V.rows());
    for (int i = 0; i < V.rows(); ++i) {
      u[(size_t)i].c0 = -p(i);
      for (int j = 0; j < V.cols(); ++j)
        if (V(i, j) != 0) u[(size_t)i].terms.push_back({lam[(size_t)j], V(i, j)});
    }
    int s = B.add(0.0);
    add_norm_epigraph(B, n, u, s);
    auto sol = lp_solve(B.build({{s, 1.0}}, LPSense::Minimize));
    if (sol.status == LPStatus::Infeasible)
      throw EmptyIntersection("section is empty");
    if (sol.status != LPStatus::Optimal)
      throw NumericalBreakdown("dist_point_to_section LP failed");
    return std::max(0.0, sol.value);
  }
  if (n.kind == NormSpec::Kind::L2 && D.kind == ConvexBody::Kind::Ball) {
    auto [HA, Hb] = D.hull_constraints();
    AffineSubspace S2 = S.intersect(AffineSubspace(HA, Hb));
    if (S2.empty()) throw EmptyIntersection("section is empty");
    const Vec& c = S2.point();
    const Mat& K = S2.basis();
    // Coordinates without the mu coordinate (K has zero mu-row when S lies
    // in the hull plane, so restriction preserves the metric).
    auto strip = [&](const Vec& v) {
      Vec out(v.size() - 1);
      int k = 0;
      for (int j = 0; j < v.size(); ++j)
        if (j != D.mu_coord) out(k++) = v(j);
      return out;
    };
    Vec cr = strip(c);
    Mat Kr(cr.size(), K.cols());
    for (int j = 0; j < K.cols(); ++j) Kr.col(j) = strip(Vec(K.col(j)));
    Vec t0 = -(Kr.transpose() * cr);
    double perp2 = cr.squaredNorm() - (Kr.transpose() * cr).squaredNorm();
    double rho2 = 1.0 - perp2;
    if (rho2 < -1e-12) throw EmptyIntersection("subspace misses the ball");
    double rho = std::sqrt(std::max(0.0, rho2));
    // Decompose p - c into K-component and orthogonal remainder.
    Vec u = K.transpose() * (p - c);
    Vec w = (p - c) - K * u;
    Vec diff = u - t0;
    double dn = diff.norm();
    Vec tstar = (dn <= rho) ? u : Vec(t0 + diff * (rho / dn));
    return std::sqrt(w.squaredNorm() + (u - tstar).squaredNorm());
  }
  if (n.kind == NormSpec::Kind::L2 && D.kind == ConvexBody::Kind::ConeBall) {
    throw NoApplicableMethod("use the flat-cone helper for lower-s sines");
  }
  if (n.kind == NormSpec::Kind::L2 && D.is_polytope_like()) {
    // Frank-Wolfe with an LP-based LMO over the section.
    Mat V = D.ext_points();
    // Initial feasible point.
    LPBuilder B0;
    std::vector<int> lam(V.cols());
    for (auto& v : lam) v = B0.add(0.0);
    LinExpr sum;
    for (int j : lam) sum.push_back({j, 1.0});
    B0.eq(sum, 1.0);
    for (int r = 0; r < S.A().rows(); ++r) {
      LinExpr row;
      for (int j = 0; j < V.cols(); ++j) {
        double c = S.A().row(r) * V.col(j);
        if (c != 0) row.push_back({lam[(size_t)j], c});
      }
      B0.eq(row, S.b()(r));
    }
    auto lmo = [&](const Vec& g) {
      LinExpr obj;
      for (int j = 0; j < V.cols(); ++j)
        obj.push_back({lam[(size_t)j], g.dot(V.col(j))});
      auto sol = lp_solve(B0.build(obj, LPSense::Minimize));
      if (sol.status != LPStatus::Optimal)
        throw EmptyIntersection("section is empty");
      Vec y = Vec::Zero(V.rows());
      for (int j = 0; j < V.cols(); ++j) y += sol.point(lam[(size_t)j]) * V.col(j);
      return y;
    };
    Vec y = lmo(Vec::Zero(V.rows()));
    for (int it = 0; it < 3000; ++it) {
      Vec g = y - p;
      Vec v = lmo(g);
      Vec d = v - y;
      double gap = -g.dot(d);
      if (gap <= 0.5 * tols().tol_opt * tols().tol_opt) break;
      double den = d.squaredNorm();
      if (den < 1e-18) break;
      double gamma = std::clamp(-g.dot(d) / den, 0.0, 1.0);
      y += gamma * d;
    }
    return (y - p).norm();
  }
  throw NoApplicableMethod("dist_point_to_section");
}

double l1_dist_to_simplex(const Vec& y) {
  if (std::abs(y.sum() - 1.0) > 1e-7)
    throw NotOnHyperplane("l1_dist_to_simplex requires sum(y) = 1");
  return std::max(0.0, y.lpNorm<1>() - 1.0);
}

// ---------------------------------------------------------------------------
// Sines

double sine_bruteforce(const AffineSubspace& B, const ConvexBody& D,
                       const NormSpec& n, int samples, std::uint64_t seed) {
  if (B.empty()) throw EmptySubspace("sine_bruteforce");
  const bool flat_cone = (D.kind == ConvexBody::Kind::ConeBall);
  if (flat_cone && !D.cone_flat)
    throw NoApplicableMethod("sine_bruteforce needs the flat-cone body");
  Rng rng(seed);
  const Vec& q = B.point();
  const Mat& K = B.basis();
  // Sampling scale from the body size around q.
  double scale = 2.0;
  if (D.is_polytope_like()) {
    Mat V = D.ext_points();
    for (int j = 0; j < V.cols(); ++j) scale = std::max(scale, (V.col(j) - q).norm());
  }
  double best = std::numeric_limits<double>::infinity();
  int outside = 0;
  for (int s = 0; s < samples; ++s) {
    Vec t(K.cols());
    for (int j = 0; j < t.size(); ++j) t(j) = rng.normal();
    double r = scale * (0.02 + 3.0 * rng.uniform() * rng.uniform());
    double tn = t.norm();
    if (tn < 1e-12) continue;
    Vec p = q + K * (t * (r / tn));
    if (D.contains(p, 1e-9)) continue;
    double d_body;
    if (flat_cone) {
      // Flat-cone geometry (lower-s rescaled metric): closed-form projection.
      // Body here must be constructed with cone_D = dim-1 in flat coords.
      d_body = (p - project_flat_cone(p)).norm();
    } else {
      d_body = dist_point_to_body(n, p, D);
    }
    if (d_body <= 1e-10) continue;
    ++outside;
    double d_sec;
    if (flat_cone) {
      // Dykstra between B and the flat cone.
      Vec x = p, pvec = Vec::Zero(p.size()), qvec = Vec::Zero(p.size());
      for (int it = 0; it < 4000; ++it) {
        Vec ya = project_affine(B, x + pvec);
        pvec = x + pvec - ya;
        Vec yb = project_flat_cone(ya + qvec);
        qvec = ya + qvec - yb;
        if ((yb - x).norm() < 1e-12 && it > 10) { x = yb; break; }
        x = yb;
      }
      d_sec = (p - x).norm();
    } else {
      d_sec = dist_point_to_section(n, p, B, D);
    }
    if (d_sec <= 1e-12) continue;
    best = std::min(best, d_body / d_sec);
  }
  if (outside == 0) throw DegenerateInput("subspace contained in the body");
  return best;
}

double sine_principal_angles(const Mat& Bin, const Mat& Cin) {
  auto orth = [](const Mat& M) {
    if (M.cols() == 0) return Mat(M.rows(), 0);
    Eigen::ColPivHouseholderQR<Mat> qr(M);
    qr.setThreshold(1e-10);
    int r = (int)qr.rank();
    Mat Q = qr.householderQ() * Mat::Identity(M.rows(), r);
    return Q;
  };
  Mat B = orth(Bin), C = orth(Cin);
  // Intersection via the kernel of [B, -C].
  Mat S(B.rows(), B.cols() + C.cols());
  S << B, -C;
  Mat ker = (B.cols() + C.cols() > 0) ? kernel_basis(S) : Mat(S.cols(), 0);
  Mat I(B.rows(), ker.cols());
  for (int j = 0; j < ker.cols(); ++j)
    I.col(j) = B * ker.block(0, j, B.cols(), 1);
  Mat Iorth = orth(I);
  auto project_out = [&](const Mat& M) {
    if (Iorth.cols() == 0) return M;
    return Mat(M - Iorth * (Iorth.transpose() * M));
  };
  Mat Bp = orth(project_out(B));
  if (Bp.cols() == 0) throw DegenerateInput("first subspace inside second");
  Mat Cp = orth(project_out(C));
  if (Cp.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(Bp.transpose() * Cp);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  smax = std::min(smax, 1.0);
  return std::sqrt(1.0 - smax * smax);
}

double sine_simplex_lb(const Mat& U, const std::vector<int>& support, int labels) {
  Mat comp = kernel_basis(U.transpose());  // normals to col(U)
  LPBuilder B;
  std::vector<int> y(labels);
  for (auto& v : y) v = B.add(0.0);
  int t = B.add(std::nullopt);
  LinExpr sum;
  for (int j : y) sum.push_back({j, 1.0});
  B.eq(sum, 1.0);
  for (int r = 0; r < comp.cols(); ++r) {
    LinExpr row;
    for (int j = 0; j < labels; ++j)
      if (comp(j, r) != 0) row.push_back({y[(size_t)j], comp(j, r)});
    B.eq(row, 0.0);
  }
  for (int i : support) B.ub({{t, 1.0}, {y[(size_t)i], -1.0}}, 0.0);
  auto sol = lp_solve(B.build({{t, 1.0}}, LPSense::Maximize));
  if (sol.status != LPStatus::Optimal)
    throw EmptyIntersection("subspace misses the simplex");
  return sol.value;
}

double sine_ball(const AffineSubspace& U_in_plane) {
  if (U_in_plane.empty()) throw EmptyIntersection("sine_ball");
  double rho = min_norm_on_affine(NormSpec::l2(), U_in_plane).second;
  if (rho > 1 + 1e-9) throw EmptyIntersection("subspace misses the ball");
  return std::sqrt(std::max(0.0, 1.0 - rho * rho));
}

double sine_chain(const std::vector<double>& component_sines) {
  if (component_sines.empty()) throw DimensionMismatch("sine_chain: empty list");
  return *std::min_element(component_sines.begin(), component_sines.end());
}

double sine_prob_system(int family_size) {
  if (family_size < 1) throw DimensionMismatch("sine_prob_system");
  return 1.0 / family_size;
}

}  // namespace ib
