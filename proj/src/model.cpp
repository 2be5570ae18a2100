#include "ib/model.hpp"

#include <cmath>
#include <sstream>

#include "ib/detail/lp_builder.hpp"

namespace ib {

using detail::LPBuilder;
using detail::LinExpr;

OutcomeSpace make_outcome_space(Vec mu, ConvexBody body, int ext_resolution) {
  OutcomeSpace s;
  s.dim_Y = body.dim();
  s.mu = std::move(mu);
  s.body = std::move(body);
  s.ext_resolution = ext_resolution;
  s.ext = s.body.ext_points(ext_resolution);
  switch (s.body.kind) {
    case ConvexBody::Kind::SimplexOfLabels:
      s.y_norm = NormSpec::l1();  // hull of the simplex is the l1 ball
      break;
    case ConvexBody::Kind::Ball: {
      // absconv{ y_mu = 1, ||rest|| <= 1 } has gauge max(|y_mu|, ||rest||_2).
      std::vector<int> mu_idx = {s.body.mu_coord}, rest;
      for (int j = 0; j < s.dim_Y; ++j)
        if (j != s.body.mu_coord) rest.push_back(j);
      s.y_norm = NormSpec::max_of({{mu_idx, NormSpec::linf()}, {rest, NormSpec::l2()}});
      break;
    }
    default:
      s.y_norm = NormSpec::hull(s.ext);
      break;
  }
  return s;
}

Mat f_matrix(const HypothesisFamily& fam, int x, const Vec& theta) {
  if (x < 0 || x >= fam.num_arms()) throw IndexOutOfGrid("arm index");
  const auto& T = fam.F_tensor[(size_t)x];
  Mat F(fam.dim_W, T.empty() ? 0 : (int)T[0].cols());
  for (int w = 0; w < fam.dim_W; ++w)
    F.row(w) = theta.transpose() * T[(size_t)w];
  return F;
}

Mat f_matrix(const HypothesisFamily& fam, int x, int theta_idx) {
  if (theta_idx < 0 || theta_idx >= fam.num_hypotheses())
    throw IndexOutOfGrid("hypothesis index");
  return f_matrix(fam, x, fam.H_grid[(size_t)theta_idx]);
}

Vec f_apply(const HypothesisFamily& fam, int x, const Vec& z, const Vec& y) {
  if (x < 0 || x >= fam.num_arms()) throw IndexOutOfGrid("arm index");
  const auto& T = fam.F_tensor[(size_t)x];
  Vec out(fam.dim_W);
  for (int w = 0; w < fam.dim_W; ++w) out(w) = z.transpose() * T[(size_t)w] * y;
  return out;
}

// ---------------------------------------------------------------------------
// CredalSection

CredalSection credal_section(const HypothesisFamily& fam, const OutcomeSpace& space,
                             int x, const Vec& theta) {
  CredalSection s;
  s.V = space.ext;
  s.F = f_matrix(fam, x, theta);
  return s;
}

namespace {

LPBuilder section_builder(const Mat& V, const Mat& F, std::vector<int>* lambda) {
  LPBuilder B;
  lambda->resize((size_t)V.cols());
  for (auto& v : *lambda) v = B.add(0.0);
  LinExpr sum;
  for (int j : *lambda) sum.push_back({j, 1.0});
  B.eq(sum, 1.0);
  Mat FV = F * V;  // D_W x nverts
  for (int w = 0; w < FV.rows(); ++w) {
    LinExpr row;
    for (int j = 0; j < FV.cols(); ++j)
      if (FV(w, j) != 0) row.push_back({(*lambda)[(size_t)j], FV(w, j)});
    B.eq(row, 0.0);
  }
  return B;
}

}  // namespace

double CredalSection::optimize(const Vec& c, double c0, bool maximize) const {
  return optimize_point(c, c0, maximize).first;
}

std::pair<double, Vec> CredalSection::optimize_point(const Vec& c, double c0,
                                                     bool maximize) const {
  std::vector<int> lambda;
  LPBuilder B = section_builder(V, F, &lambda);
  LinExpr obj;
  Vec cV = V.transpose() * c;
  for (int j = 0; j < V.cols(); ++j) obj.push_back({lambda[(size_t)j], cV(j)});
  auto sol = lp_solve(B.build(obj, maximize ? LPSense::Maximize : LPSense::Minimize));
  if (sol.status == LPStatus::Infeasible)
    throw InfeasibleCredalSet("credal section is empty");
  if (sol.status != LPStatus::Optimal)
    throw NumericalBreakdown("credal section LP failed");
  Vec y = Vec::Zero(V.rows());
  for (int j = 0; j < V.cols(); ++j) y += sol.point(lambda[(size_t)j]) * V.col(j);
  return {sol.value + c0, y};
}

Vec CredalSection::any_point() const {
  std::vector<int> lambda;
  LPBuilder B = section_builder(V, F, &lambda);
  auto sol = lp_solve(B.build({}, LPSense::Minimize));
  if (sol.status != LPStatus::Optimal)
    throw InfeasibleCredalSet("credal section is empty");
  Vec y = Vec::Zero(V.rows());
  for (int j = 0; j < V.cols(); ++j) y += sol.point(lambda[(size_t)j]) * V.col(j);
  return y;
}

bool CredalSection::feasible() const {
  try {
    any_point();
    return true;
  } catch (const InfeasibleCredalSet&) {
    return false;
  }
}

ValidationReport validate_family(const HypothesisFamily& fam, const OutcomeSpace& space) {
  ValidationReport rep;
  int fail_onto = 0, fail_feas = 0;
  for (int x = 0; x < fam.num_arms(); ++x) {
    for (int h = 0; h < fam.num_hypotheses(); ++h) {
      ValidationEntry e;
      e.arm = x;
      e.hyp = h;
      Mat F = f_matrix(fam, x, h);
      e.onto = (rank(F) == fam.dim_W);
      e.feasible = credal_section(fam, space, x, fam.H_grid[(size_t)h]).feasible();
      if (!e.onto) ++fail_onto;
      if (!e.feasible) ++fail_feas;
      rep.ok = rep.ok && e.onto && e.feasible;
      rep.entries.push_back(e);
    }
  }
  std::ostringstream os;
  os << "pairs=" << rep.entries.size() << " onto_failures=" << fail_onto
     << " feasibility_failures=" << fail_feas;
  rep.summary = os.str();
  return rep;
}

double lower_prevision(const HypothesisFamily& fam, const RewardSpec& reward,
                       const OutcomeSpace& space, int x, const Vec& theta) {
  return credal_section(fam, space, x, theta)
      .optimize(reward.c[(size_t)x], reward.c0[(size_t)x], false);
}

double upper_prevision(const HypothesisFamily& fam, const RewardSpec& reward,
                       const OutcomeSpace& space, int x, const Vec& theta) {
  return credal_section(fam, space, x, theta)
      .optimize(reward.c[(size_t)x], reward.c0[(size_t)x], true);
}

std::pair<int, double> optimal_arm(const HypothesisFamily& fam, const RewardSpec& reward,
                                   const OutcomeSpace& space, const Vec& theta) {
  int best_arm = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < fam.num_arms(); ++x) {
    double v = lower_prevision(fam, reward, space, x, theta);
    if (v > best + 1e-12) {  // strict improvement: ties keep the lowest index
      best = v;
      best_arm = x;
    }
  }
  return {best_arm, best};
}

std::pair<double, Vec> game_value(const Mat& P) {
  // max v s.t. x^T P e_b >= v for all b, x in the simplex.
  LPBuilder B;
  std::vector<int> xs((size_t)P.rows());
  for (auto& v : xs) v = B.add(0.0);
  int v = B.add(std::nullopt);
  LinExpr sum;
  for (int j : xs) sum.push_back({j, 1.0});
  B.eq(sum, 1.0);
  for (int b = 0; b < P.cols(); ++b) {
    LinExpr row{{v, 1.0}};
    for (int a = 0; a < P.rows(); ++a) row.push_back({xs[(size_t)a], -P(a, b)});
    B.ub(row, 0.0);
  }
  auto sol = lp_solve(B.build({{v, 1.0}}, LPSense::Maximize));
  if (sol.status != LPStatus::Optimal)
    throw NumericalBreakdown("game value LP failed");
  Vec strat(P.rows());
  for (int a = 0; a < P.rows(); ++a) strat(a) = sol.point(xs[(size_t)a]);
  return {sol.value, strat};
}

ConvexifiedReward::ConvexifiedReward(const ConvexBody& body, Vec vertex_values)
    : V_(body.ext_points()), rv_(std::move(vertex_values)) {
  if (!body.is_polytope_like())
    throw UnsupportedBody("convexify_reward needs a polytope body");
  if (rv_.size() != V_.cols()) throw DimensionMismatch("vertex value count");
}

double ConvexifiedReward::operator()(const Vec& y) const {
  LPBuilder B;
  std::vector<int> z((size_t)V_.cols());
  for (auto& v : z) v = B.add(0.0);
  LinExpr sum;
  for (int j : z) sum.push_back({j, 1.0});
  B.eq(sum, 1.0);
  for (int i = 0; i < V_.rows(); ++i) {
    LinExpr row;
    for (int j = 0; j < V_.cols(); ++j)
      if (V_(i, j) != 0) row.push_back({z[(size_t)j], V_(i, j)});
    B.eq(row, y(i));
  }
  LinExpr obj;
  for (int j = 0; j < V_.cols(); ++j) obj.push_back({z[(size_t)j], rv_(j)});
  auto sol = lp_solve(B.build(obj, LPSense::Minimize));
  if (sol.status != LPStatus::Optimal)
    throw QueryOutsideBody("convexified reward query outside the body");
  return sol.value;
}

}  // namespace ib
