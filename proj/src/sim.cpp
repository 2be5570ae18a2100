#include "ib/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ib/geometry.hpp"
#include "ib/model.hpp"
#include "ib/rng.hpp"

namespace ib {

namespace {

int grid_index(const HypothesisFamily& fam, const Vec& theta) {
  for (int i = 0; i < fam.num_hypotheses(); ++i) {
    const Vec& h = fam.H_grid[(size_t)i];
    if (h.size() == theta.size() && (h - theta).lpNorm<Eigen::Infinity>() <= 1e-12)
      return i;
  }
  return -1;
}

}  // namespace

Trace run_episode(AgentPolicy& agent, NaturePolicy& nature, const Scenario& sc,
                  const Vec& theta, int N, std::uint64_t seed) {
  Trace tr;
  tr.scenario = sc.meta.name;
  tr.seed = seed;
  tr.theta_index = grid_index(sc.family, theta);
  if (tr.theta_index < 0)
    throw IndexOutOfGrid("run_episode: theta* is not on the hypothesis grid");
  if (N < 0) throw DegenerateInput("run_episode: negative horizon");

  Rng root(seed);
  try {
    agent.reset(sc, N, root.stream(1).next_u64());
    nature.reset(sc, theta, root.stream(2).next_u64());
  } catch (const IbError& e) {
    tr.flags.push_back(std::string("reset: ") + e.what());
    return tr;
  }

  tr.rows.reserve((size_t)N);
  for (int t = 0; t < N; ++t) {
    TraceRow row;
    try {
      row.arm = agent.select_arm();
      row.y = nature.respond(row.arm);
      row.reward = sc.reward.eval(row.arm, row.y);
      agent.observe(row.y);
    } catch (const IbError& e) {
      tr.flags.push_back("round " + std::to_string(t + 1) + ": " + e.what());
      break;
    }
    tr.rows.push_back(std::move(row));
  }
  return tr;
}

RegretRecord regret_trace(const Trace& trace, const Scenario& sc, const Vec& theta) {
  RegretRecord rec;
  rec.me_star = optimal_arm(sc.family, sc.reward, sc.space, theta).second;
  rec.cum_regret = Vec::Zero((int)trace.rows.size());
  double sum = 0;
  for (int t = 0; t < (int)trace.rows.size(); ++t) {
    sum += trace.rows[(size_t)t].reward;
    rec.cum_regret(t) = (double)(t + 1) * rec.me_star - sum;
  }
  return rec;
}

MonteCarloSummary monte_carlo(AgentPolicy& agent, NaturePolicy& nature,
                              const Scenario& sc, const Vec& theta, int N,
                              int reps, std::uint64_t seed,
                              const RepObserver& on_rep) {
  if (reps < 1) throw DegenerateInput("monte_carlo: reps must be >= 1");
  MonteCarloSummary out;
  out.horizon = N;
  out.reps = reps;
  Vec sum = Vec::Zero(N), sumsq = Vec::Zero(N);
  for (int rep = 0; rep < reps; ++rep) {
    Trace tr = run_episode(agent, nature, sc, theta, N, seed + (std::uint64_t)rep);
    RegretRecord rec = regret_trace(tr, sc, theta);
    if (on_rep) on_rep(rep, tr, rec);
    out.rep_flags.push_back(tr.flags);
    double hold = 0;
    for (int t = 0; t < N; ++t) {
      if (t < rec.cum_regret.size()) hold = rec.cum_regret(t);
      sum(t) += hold;
      sumsq(t) += hold * hold;
    }
  }
  out.mean_regret = sum / (double)reps;
  out.std_regret = Vec::Zero(N);
  if (reps > 1) {
    for (int t = 0; t < N; ++t) {
      const double var =
          (sumsq(t) - (double)reps * out.mean_regret(t) * out.mean_regret(t)) /
          (double)(reps - 1);
      out.std_regret(t) = std::sqrt(std::max(0.0, var));
    }
  }
  return out;
}

ConcentrationResult concentration_experiment(const Scenario& sc, const Vec& theta,
                                             NaturePolicy& nature, int x, int tau,
                                             double delta, int reps,
                                             std::uint64_t seed, double c_exp) {
  if (x < 0 || x >= sc.family.num_arms())
    throw IndexOutOfGrid("concentration_experiment: arm index out of range");
  if (tau < 1 || reps < 1)
    throw DegenerateInput("concentration_experiment: tau and reps must be >= 1");

  // Flat of the credal section: {F_{x,theta} y = 0} intersected with the
  // normalizing hyperplane mu(y) = 1.
  const Mat F = f_matrix(sc.family, x, theta);
  Mat A(F.rows() + 1, F.cols());
  A.topRows(F.rows()) = F;
  A.bottomRows(1) = sc.space.mu.transpose();
  Vec b = Vec::Zero(A.rows());
  b(A.rows() - 1) = 1.0;
  const AffineSubspace flat(A, b);

  int violations = 0;
  for (int rep = 0; rep < reps; ++rep) {
    nature.reset(sc, theta, seed + (std::uint64_t)rep);
    Vec ybar = Vec::Zero(sc.space.dim_Y);
    for (int t = 0; t < tau; ++t) ybar += nature.respond(x);
    ybar /= (double)tau;
    if (dist_point_to_affine(sc.space.y_norm, ybar, flat) >= delta) ++violations;
  }

  ConcentrationResult res;
  res.empirical_rate = (double)violations / (double)reps;
  const double DW = (double)sc.family.dim_W;
  res.main_bound =
      2.0 * DW * std::exp(-c_exp * (double)tau * delta * delta / std::pow(DW, 5.0 / 3.0));
  if (sc.space.body.kind == ConvexBody::Kind::SimplexOfLabels) {
    const double B = (double)sc.space.body.labels;
    res.simplex_bound = std::pow(2.0 * std::exp(1.0) * B / (DW + 1.0), DW + 1.0) *
                        std::exp(-(double)tau * delta * delta / 2.0);
  } else {
    res.simplex_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

void write_trace_csv(std::ostream& os, const Trace& trace, const RegretRecord& reg) {
  os << "round,arm,reward,cum_regret\n";
  os << std::setprecision(17);
  for (int t = 0; t < (int)trace.rows.size(); ++t) {
    const TraceRow& row = trace.rows[(size_t)t];
    os << (t + 1) << ',' << row.arm << ',' << row.reward << ','
       << reg.cum_regret(t) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const MonteCarloSummary& summary) {
  os << "round,mean_regret,std_regret,reps\n";
  os << std::setprecision(17);
  for (int t = 0; t < summary.horizon; ++t) {
    os << (t + 1) << ',' << summary.mean_regret(t) << ',' << summary.std_regret(t)
       << ',' << summary.reps << '\n';
  }
}

}  // namespace ib
