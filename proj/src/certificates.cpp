#include "ib/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ib/detail/lp_builder.hpp"

namespace ib {

using detail::AffExpr;
using detail::LinExpr;
using detail::LPBuilder;

namespace {

// Relative quantization key for deduplication of vectors.
std::string quant_key(const Vec& v, double resolution = 1e-9) {
  double scale = std::max(1.0, v.lpNorm<Eigen::Infinity>());
  std::string key;
  key.reserve((size_t)v.size() * 8);
  for (int i = 0; i < v.size(); ++i) {
    long long q = llround(v(i) / scale / resolution);
    key.append(reinterpret_cast<const char*>(&q), sizeof(q));
  }
  return key;
}

// Canonical direction: unit vector with the first non-negligible coordinate
// positive (so v and -v collide, as befits symmetric gauges).
Vec canon_direction(const Vec& v) {
  Vec u = v / v.norm();
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

// Indices of the extreme columns of absconv(P.cols).  Colinear columns are
// collapsed first (keeping the longest), then interior points are removed by
// membership LPs.
std::vector<int> prune_absconv(const Mat& P) {
  std::map<std::string, int> by_dir;
  for (int j = 0; j < P.cols(); ++j) {
    if (P.col(j).norm() < 1e-12) continue;
    std::string key = quant_key(canon_direction(P.col(j)), 1e-8);
    auto it = by_dir.find(key);
    if (it == by_dir.end() || P.col(j).norm() > P.col(it->second).norm())
      by_dir[key] = j;
  }
  std::vector<int> alive;
  for (const auto& [k, j] : by_dir) alive.push_back(j);
  if ((int)alive.size() <= P.rows() + 1) return alive;
  // Interior columns are harmless (the gauges below take maxima over
  // columns), so LP-based pruning is purely an optimization; it costs one
  // LP per column and is counterproductive on large collections.
  if ((int)alive.size() > 300) return alive;

  for (size_t k = 0; k < alive.size();) {
    LPBuilder B;
    std::vector<std::pair<int, int>> vars;  // (plus, minus) per other column
    std::vector<int> others;
    for (size_t i = 0; i < alive.size(); ++i) {
      if (i == k) continue;
      others.push_back(alive[i]);
      vars.push_back({B.add(0.0), B.add(0.0)});
    }
    for (int r = 0; r < P.rows(); ++r) {
      LinExpr row;
      for (size_t i = 0; i < others.size(); ++i) {
        double c = P(r, others[i]);
        if (c != 0) {
          row.push_back({vars[i].first, c});
          row.push_back({vars[i].second, -c});
        }
      }
      B.eq(row, P(r, alive[k]));
    }
    LinExpr obj;
    for (const auto& [a, b] : vars) {
      obj.push_back({a, 1.0});
      obj.push_back({b, 1.0});
    }
    auto sol = lp_solve(B.build(obj, LPSense::Minimize));
    if (sol.status == LPStatus::Optimal && sol.value <= 1.0 + 1e-9)
      alive.erase(alive.begin() + (long)k);
    else
      ++k;
  }
  return alive;
}

Mat select_cols(const Mat& P, const std::vector<int>& idx) {
  Mat out(P.rows(), (int)idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out.col((int)i) = P.col(idx[i]);
  return out;
}

// Vertices of { g : |p_j . g| <= 1 } for the columns p_j of P (full row rank
// required so the polar is bounded).  One of each +/- pair is returned.
Mat polar_vertices(const Mat& P) {
  const int D = (int)P.rows();
  const int m = (int)P.cols();
  if (D == 1) {
    double s = P.cwiseAbs().maxCoeff();
    if (s < 1e-14) throw InfeasiblePreimage("zero image body");
    Mat G(1, 1);
    G(0, 0) = 1.0 / s;
    return G;
  }
  double combos = 1;
  for (int i = 0; i < D; ++i) combos *= double(m - i) / (i + 1);
  combos *= std::pow(2.0, D - 1);
  if (combos > 5e6)
    throw NoApplicableMethod("W dual vertex enumeration too large");

  std::vector<Vec> verts;
  std::map<std::string, bool> seen;
  std::vector<int> idx(D);
  for (int i = 0; i < D; ++i) idx[i] = i;
  auto advance = [&]() {
    int i = D - 1;
    while (i >= 0 && idx[i] == m - D + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < D; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  do {
    Mat A(D, D);
    for (int i = 0; i < D; ++i) A.row(i) = P.col(idx[i]).transpose();
    Eigen::FullPivLU<Mat> lu(A);
    lu.setThreshold(tols().rank_eps);
    if (lu.rank() < D) continue;
    for (int signs = 0; signs < (1 << (D - 1)); ++signs) {
      Vec rhs(D);
      rhs(0) = 1.0;
      for (int i = 1; i < D; ++i) rhs(i) = (signs >> (i - 1)) & 1 ? -1.0 : 1.0;
      Vec g = lu.solve(rhs);
      if ((P.transpose() * g).cwiseAbs().maxCoeff() > 1.0 + 1e-7) continue;
      std::string key = quant_key(canon_direction(g));
      if (!seen.emplace(key, true).second) continue;
      verts.push_back(g);
    }
  } while (advance());
  if (verts.empty()) throw InfeasiblePreimage("polar has no vertices");
  Mat G(D, (int)verts.size());
  for (size_t j = 0; j < verts.size(); ++j) G.col((int)j) = verts[j];
  return G;
}

// Deduplicates grid pairs by their constraint matrix.
template <class Fn>
void for_each_distinct_f(const HypothesisFamily& fam, Fn&& fn) {
  std::map<std::string, bool> seen;
  for (int x = 0; x < fam.num_arms(); ++x) {
    for (int h = 0; h < fam.num_hypotheses(); ++h) {
      Mat F = f_matrix(fam, x, h);
      Vec flat = Eigen::Map<const Vec>(F.data(), F.size());
      std::string key = quant_key(flat);
      if (!seen.emplace(key, true).second) continue;
      fn(x, h, F);
    }
  }
}

}  // namespace

double WDual::operator()(const Vec& w) const {
  if (G.cols() == 0) return 0.0;
  return (G.transpose() * w).cwiseAbs().maxCoeff();
}

WDual build_w_dual(const HypothesisFamily& fam, const OutcomeSpace& space) {
  WDual wd;
  wd.dim_W = fam.dim_W;
  std::vector<Mat> parts;
  int total = 0;
  for_each_distinct_f(fam, [&](int, int, const Mat& F) {
    Mat P = F * space.ext;
    if (rank(P) < fam.dim_W)
      throw InfeasiblePreimage("constraint map not onto on the body span");
    Mat G = polar_vertices(select_cols(P, prune_absconv(P)));
    parts.push_back(G);
    total += (int)G.cols();
  });
  Mat all(fam.dim_W, total);
  int at = 0;
  for (const Mat& G : parts) {
    all.middleCols(at, (int)G.cols()) = G;
    at += (int)G.cols();
  }
  wd.G = select_cols(all, prune_absconv(all));
  return wd;
}

double w_norm(const HypothesisFamily& fam, const OutcomeSpace& space, const Vec& w) {
  return build_w_dual(fam, space)(w);
}

ZBarSpace build_zbar(const HypothesisFamily& fam, const OutcomeSpace& space) {
  ZBarSpace zb;
  zb.dim_Z = fam.dim_Z;
  zb.dim_W = fam.dim_W;
  zb.wdual = build_w_dual(fam, space);
  zb.mu = space.mu;
  const int dims = fam.dim_Z + fam.dim_W;

  // Null subspace: stacked system over (arm grid x Y basis x W coordinate).
  Mat stacked(fam.num_arms() * space.dim_Y * fam.dim_W, dims);
  int row = 0;
  for (int x = 0; x < fam.num_arms(); ++x) {
    for (int j = 0; j < space.dim_Y; ++j) {
      for (int w = 0; w < fam.dim_W; ++w) {
        stacked.row(row).head(fam.dim_Z) =
            fam.F_tensor[(size_t)x][(size_t)w].col(j).transpose();
        stacked.row(row).tail(fam.dim_W).setZero();
        stacked(row, fam.dim_Z + w) = space.mu(j);
        ++row;
      }
    }
  }
  zb.N_basis = kernel_basis(stacked);
  zb.complement = zb.N_basis.cols() == 0
                      ? Mat(Mat::Identity(dims, dims))
                      : kernel_basis(Mat(zb.N_basis.transpose()));

  // Dual covectors: l(z,w) = g . (F(x,z,y_e) + mu(y_e) w).
  std::vector<Vec> cols;
  for (int x = 0; x < fam.num_arms(); ++x) {
    for (int e = 0; e < space.ext.cols(); ++e) {
      Vec ye = space.ext.col(e);
      double mue = space.mu.dot(ye);
      for (int j = 0; j < zb.wdual.G.cols(); ++j) {
        Vec g = zb.wdual.G.col(j);
        Vec l = Vec::Zero(dims);
        for (int w = 0; w < fam.dim_W; ++w)
          l.head(fam.dim_Z) += g(w) * (fam.F_tensor[(size_t)x][(size_t)w] * ye);
        l.tail(fam.dim_W) = mue * g;
        if (l.norm() > 1e-12) cols.push_back(l);
      }
    }
  }
  Mat all(dims, (int)cols.size());
  for (size_t j = 0; j < cols.size(); ++j) all.col((int)j) = cols[j];
  zb.L = select_cols(all, prune_absconv(all));
  return zb;
}

double zbar_norm(const ZBarSpace& zb, const Vec& v) {
  if (v.size() != zb.dim_Z + zb.dim_W) throw DimensionMismatch("zbar_norm input");
  if (zb.L.cols() == 0) return 0.0;
  return (zb.L.transpose() * v).cwiseAbs().maxCoeff();
}

double zbar_norm_theta(const ZBarSpace& zb, const Vec& theta) {
  Vec v = Vec::Zero(zb.dim_Z + zb.dim_W);
  v.head(zb.dim_Z) = theta;
  return zbar_norm(zb, v);
}

double param_R(const ZBarSpace& zb, const HypothesisFamily& fam) {
  double best = 0;
  for (const Vec& theta : fam.H_grid)
    best = std::max(best, zbar_norm_theta(zb, theta));
  return best;
}

double param_R(const HypothesisFamily& fam, const OutcomeSpace& space) {
  return param_R(build_zbar(fam, space), fam);
}

std::pair<double, std::string> param_S(const HypothesisFamily& fam,
                                       const OutcomeSpace& space,
                                       SineMethod method, const SineOptions& opts) {
  if (method == SineMethod::Chain) {
    if (opts.chain_components.empty())
      throw NoApplicableMethod("chain method needs component sines");
    return {sine_chain(opts.chain_components), "chain"};
  }
  SineMethod m = method;
  if (m == SineMethod::Auto) {
    switch (space.body.kind) {
      case ConvexBody::Kind::SimplexOfLabels: m = SineMethod::SimplexLB; break;
      case ConvexBody::Kind::Ball: m = SineMethod::Ball; break;
      case ConvexBody::Kind::ConeBall: m = SineMethod::ConeFlat; break;
      default: m = SineMethod::Bruteforce; break;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  int skipped = 0;
  std::uint64_t subseed = opts.seed;
  for_each_distinct_f(fam, [&](int, int, const Mat& F) {
    ++subseed;
    double s;
    if (m != SineMethod::SimplexLB) {
      // Zero-dimensional flats (point sections) have sine 1: the distance to
      // the flat and to its body intersection coincide.  The simplex closed
      // form keeps its own (coordinate-based) value for point sections.
      Mat stacked(F.rows() + 1, F.cols());
      stacked.topRows(F.rows()) = F;
      stacked.bottomRows(1) = space.mu.transpose();
      if (kernel_basis(stacked).cols() == 0) {
        best = std::min(best, 1.0);
        return;
      }
    }
    try {
      switch (m) {
        case SineMethod::SimplexLB: {
          if (space.body.kind != ConvexBody::Kind::SimplexOfLabels)
            throw NoApplicableMethod("simplex bound needs a simplex body");
          std::vector<int> support = opts.support;
          if (support.empty())
            for (int i = 0; i < space.body.labels; ++i) support.push_back(i);
          s = sine_simplex_lb(kernel_basis(F), support, space.body.labels);
          break;
        }
        case SineMethod::Ball: {
          if (space.body.kind != ConvexBody::Kind::Ball)
            throw NoApplicableMethod("ball closed form needs a ball body");
          int c = space.body.mu_coord;
          Mat A(F.rows(), F.cols() - 1);
          A << F.leftCols(c), F.rightCols(F.cols() - c - 1);
          s = sine_ball(AffineSubspace(A, Vec(-F.col(c))));
          break;
        }
        case SineMethod::ConeFlat: {
          if (space.body.kind != ConvexBody::Kind::ConeBall || fam.dim_W != 1)
            throw NoApplicableMethod("cone estimate needs a cone body, dim W 1");
          int D = space.body.cone_D;
          Mat A = Mat::Zero(1, D + 1);
          A(0, 0) = F(0, 0) - F(0, 1);
          for (int i = 1; i <= D; ++i) A(0, i) = F(0, i + 1);
          s = sine_bruteforce(AffineSubspace(A, Vec(-F.col(1))),
                              ConvexBody::cone_ball_flat(D), NormSpec::l2(),
                              opts.samples, subseed);
          break;
        }
        case SineMethod::Bruteforce: {
          Mat A(F.rows() + 1, F.cols());
          A.topRows(F.rows()) = F;
          A.bottomRows(1) = space.mu.transpose();
          Vec b = Vec::Zero(F.rows() + 1);
          b(F.rows()) = 1.0;
          s = sine_bruteforce(AffineSubspace(A, b), space.body, space.y_norm,
                              opts.samples, subseed);
          break;
        }
        default:
          throw NoApplicableMethod("unsupported sine method");
      }
    } catch (const DegenerateInput&) {
      // Flat contained in the body: no point outside, the pair is vacuous.
      ++skipped;
      return;
    }
    best = std::min(best, s);
  });
  const char* names[] = {"auto", "simplex-lb", "ball", "cone-flat", "bruteforce", "chain"};
  std::ostringstream note;
  note << names[(int)m] << " grid_pairs_skipped=" << skipped;
  if (!std::isfinite(best)) throw NoApplicableMethod("no grid pair admitted a sine");
  return {best, note.str()};
}

double param_C(const RewardSpec& reward, const OutcomeSpace& space) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int x = 0; x < reward.num_arms(); ++x) {
    for (int e = 0; e < space.ext.cols(); ++e) {
      double r = reward.eval(x, space.ext.col(e));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return hi - lo;
}

namespace {

// Minimal y-norm distance between the credal sections of theta and theta' at
// a common arm.  LP for polyhedral norms; Frank-Wolfe over the extreme-point
// parametrization otherwise (differences lie in the mu = 0 hyperplane, where
// ball-body norms reduce to the Euclidean part).
double section_distance(const HypothesisFamily& fam, const OutcomeSpace& space,
                        int arm, const Vec& theta, const Vec& theta2) {
  const Mat& V = space.ext;
  Mat F1 = f_matrix(fam, arm, theta);
  Mat F2 = f_matrix(fam, arm, theta2);
  if (space.y_norm.polyhedral()) {
    LPBuilder B;
    std::vector<int> l1((size_t)V.cols()), l2((size_t)V.cols());
    for (auto& v : l1) v = B.add(0.0);
    for (auto& v : l2) v = B.add(0.0);
    int s = B.add(0.0);
    auto add_section = [&](const Mat& F, const std::vector<int>& lam) {
      LinExpr sum;
      for (int j : lam) sum.push_back({j, 1.0});
      B.eq(sum, 1.0);
      Mat FV = F * V;
      for (int w = 0; w < FV.rows(); ++w) {
        LinExpr row;
        for (int j = 0; j < FV.cols(); ++j)
          if (FV(w, j) != 0) row.push_back({lam[(size_t)j], FV(w, j)});
        B.eq(row, 0.0);
      }
    };
    add_section(F1, l1);
    add_section(F2, l2);
    std::vector<AffExpr> diff((size_t)V.rows());
    for (int i = 0; i < V.rows(); ++i) {
      for (int j = 0; j < V.cols(); ++j) {
        if (V(i, j) == 0) continue;
        diff[(size_t)i].terms.push_back({l1[(size_t)j], V(i, j)});
        diff[(size_t)i].terms.push_back({l2[(size_t)j], -V(i, j)});
      }
    }
    detail::add_norm_epigraph(B, space.y_norm, diff, s);
    auto sol = lp_solve(B.build({{s, 1.0}}, LPSense::Minimize));
    if (sol.status != LPStatus::Optimal)
      throw NumericalBreakdown("section distance LP failed");
    return sol.value;
  }
  // Frank-Wolfe with LP minimization oracles over both sections.
  auto section_lmo = [&](const Mat& F, const Vec& grad) {
    CredalSection sec;
    sec.V = V;
    sec.F = F;
    // Reuse the prevision LP machinery: minimize grad . y.
    LPBuilder B;
    std::vector<int> lam((size_t)V.cols());
    for (auto& v : lam) v = B.add(0.0);
    LinExpr sum;
    for (int j : lam) sum.push_back({j, 1.0});
    B.eq(sum, 1.0);
    Mat FV = F * V;
    for (int w = 0; w < FV.rows(); ++w) {
      LinExpr row;
      for (int j = 0; j < FV.cols(); ++j)
        if (FV(w, j) != 0) row.push_back({lam[(size_t)j], FV(w, j)});
      B.eq(row, 0.0);
    }
    LinExpr obj;
    Vec gV = V.transpose() * grad;
    for (int j = 0; j < V.cols(); ++j) obj.push_back({lam[(size_t)j], gV(j)});
    auto sol = lp_solve(B.build(obj, LPSense::Minimize));
    if (sol.status != LPStatus::Optimal)
      throw InfeasibleCredalSet("empty section in gap computation");
    Vec y = Vec::Zero(V.rows());
    for (int j = 0; j < V.cols(); ++j) y += sol.point(lam[(size_t)j]) * V.col(j);
    return y;
  };
  Vec y1 = section_lmo(F1, Vec(Vec::Zero(V.rows())));
  Vec y2 = section_lmo(F2, Vec(Vec::Zero(V.rows())));
  for (int it = 0; it < 2000; ++it) {
    Vec d = y1 - y2;
    Vec a1 = section_lmo(F1, d);
    Vec a2 = section_lmo(F2, Vec(-d));
    Vec dir1 = a1 - y1, dir2 = a2 - y2;
    Vec dd = dir1 - dir2;
    double denom = dd.squaredNorm();
    double fw_gap = -(d.dot(dd));
    if (fw_gap <= 0.5 * tols().tol_opt * tols().tol_opt) break;
    double step = denom > 1e-15 ? std::clamp(-d.dot(dd) / denom, 0.0, 1.0) : 0.0;
    if (step <= 0) break;
    y1 += step * dir1;
    y2 += step * dir2;
  }
  return norm_eval(space.y_norm, Vec(y1 - y2));
}

}  // namespace

double gap_compute(const HypothesisFamily& fam, const RewardSpec& reward,
                   const OutcomeSpace& space) {
  const int H = fam.num_hypotheses();
  std::vector<int> xstar((size_t)H);
  std::vector<double> me((size_t)H);
  for (int h = 0; h < H; ++h) {
    auto [x, v] = optimal_arm(fam, reward, space, fam.H_grid[(size_t)h]);
    xstar[(size_t)h] = x;
    me[(size_t)h] = v;
  }
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < H; ++i) {
    for (int j = 0; j < H; ++j) {
      if (i == j) continue;
      // theta = grid[i], theta' = grid[j].
      if (me[(size_t)j] < me[(size_t)i] - 1e-9) continue;  // condition 1
      double cross = lower_prevision(fam, reward, space, xstar[(size_t)j],
                                     fam.H_grid[(size_t)i]);
      if (cross >= me[(size_t)i] - 1e-9) continue;  // condition 2
      g = std::min(g, section_distance(fam, space, xstar[(size_t)j],
                                       fam.H_grid[(size_t)i], fam.H_grid[(size_t)j]));
    }
  }
  return g;
}

double bound_gamma() { return 1.0 / -std::log1p(-std::exp(-2.0)); }

double bound_main(const Certificates& cert, const BoundDims& dims, double N,
                  double eta, double delta, double c_exp) {
  const double gamma = bound_gamma();
  const double Si = 1.0 / cert.S;
  const double DZ = dims.D_Z, DW = dims.D_W;
  double logterm = std::log(DZ * cert.R / delta);
  double t1 = 8 * eta * (Si + 1) * DZ * (DZ + 1) * std::sqrt(gamma * logterm * N);
  double t2 = cert.C * DW * N * N * (N + 1) *
              std::exp(-c_exp * eta * eta / (cert.R * cert.R * std::pow(DW, 5.0 / 3.0)));
  double t3 = gamma * cert.C * DZ * DZ * logterm;
  double t4 = (Si + 1) * DZ * (36 * DZ + 8) * N * delta;
  return t1 + t2 + t3 + t4;
}

double bound_simplex(const Certificates& cert, const BoundDims& dims, double N,
                     double eta, double delta, int labels) {
  const double gamma = bound_gamma();
  const double Si = 1.0 / cert.S;
  const double DZ = dims.D_Z, DW = dims.D_W;
  double logterm = std::log(DZ * cert.R / delta);
  double t1 = 8 * eta * (Si + 1) * DZ * (DZ + 1) * std::sqrt(gamma * logterm * N);
  double t2 = 0.5 * cert.C *
              std::pow(2 * std::exp(1.0) * labels / (DW + 1), DW + 1) * N * N *
              (N + 1) * std::exp(-eta * eta / (2 * cert.R * cert.R));
  double t3 = gamma * cert.C * DZ * DZ * logterm;
  double t4 = (Si + 1) * DZ * (36 * DZ + 8) * N * delta;
  return t1 + t2 + t3 + t4;
}

double simplex_recommended_eta(const Certificates& cert, double N, int labels,
                               int D_W) {
  double arg = cert.C * N * N * N * labels / (D_W + 1);
  double lg = std::max(0.0, std::log(arg));
  return cert.R * std::sqrt(2.0 * (D_W + 1) * lg);
}

double bound_gap(const Certificates& cert, const BoundDims& dims, double N,
                 double eta, double g, double c_exp) {
  if (!(g > 0)) throw ZeroGap("gap bound needs a positive gap");
  const double gamma = bound_gamma();
  const double Si = 1.0 / cert.S;
  const double DZ = dims.D_Z, DW = dims.D_W;
  double t1 = gamma * DZ * DZ *
              (256 * Si * (Si + 1) * (DZ + 1) * (DZ + 1) * eta * eta / g + cert.C) *
              std::log(144 * Si * DZ * DZ * DZ * cert.R / g);
  t1 = std::max(0.0, t1);
  double t2 = cert.C * DW * N * N * (N + 1) *
              std::exp(-c_exp * eta * eta / (cert.R * cert.R * std::pow(DW, 5.0 / 3.0)));
  return t1 + t2;
}

}  // namespace ib
