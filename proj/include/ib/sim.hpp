#pragma once
// Episode execution, regret accounting, Monte-Carlo aggregation, and the
// concentration experiments.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ib/agents.hpp"
#include "ib/nature.hpp"
#include "ib/scenario.hpp"

namespace ib {

struct TraceRow {
  int arm = -1;
  Vec y;
  double reward = 0;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::string scenario;          // scenario name from metadata
  int theta_index = -1;          // index into H_grid, -1 when off-grid
  std::uint64_t seed = 0;
  std::vector<std::string> flags;  // policy errors / early termination
};

// Alternating select/respond/observe for N rounds.  Deterministic given the
// seed (agent and nature receive derived stream seeds).  Policy errors end
// the episode early and are recorded as flags.
Trace run_episode(AgentPolicy& agent, NaturePolicy& nature, const Scenario& sc,
                  const Vec& theta, int N, std::uint64_t seed);

struct RegretRecord {
  double me_star = 0;  // optimal lower prevision under theta*
  // cum_regret[t] = (t+1) me_star - sum of the first t+1 rewards.
  Vec cum_regret;
};

RegretRecord regret_trace(const Trace& trace, const Scenario& sc, const Vec& theta);

struct MonteCarloSummary {
  int horizon = 0;
  int reps = 0;
  Vec mean_regret;  // per round
  Vec std_regret;   // per round, sample standard deviation (0 for reps = 1)
  std::vector<std::vector<std::string>> rep_flags;
};

// Sequential Monte-Carlo over `reps` episodes with per-rep seeds seed + rep;
// accumulation order is fixed (rep order) for bit-stable output.  Episodes
// ending early are padded by holding their last cumulative regret.  `on_rep`
// (optional) observes each finished episode, e.g. to emit per-rep CSV files.
using RepObserver =
    std::function<void(int rep, const Trace&, const RegretRecord&)>;
MonteCarloSummary monte_carlo(AgentPolicy& agent, NaturePolicy& nature,
                              const Scenario& sc, const Vec& theta, int N,
                              int reps, std::uint64_t seed,
                              const RepObserver& on_rep = {});

struct ConcentrationResult {
  double empirical_rate = 0;  // fraction of reps with d(ybar, flat) >= delta
  // Explicit-constant simplex bound (NaN for non-simplex bodies):
  // (2e|B|/(D_W+1))^{D_W+1} exp(-tau delta^2 / 2).
  double simplex_bound = 0;
  // General bound 2 D_W exp(-c_exp tau delta^2 / D_W^{5/3}); the universal
  // constant inside the exponential is the configurable knob c_exp.
  double main_bound = 0;
};

ConcentrationResult concentration_experiment(const Scenario& sc, const Vec& theta,
                                             NaturePolicy& nature, int x, int tau,
                                             double delta, int reps,
                                             std::uint64_t seed,
                                             double c_exp = 1.0);

// CSV emitters: `round,arm,reward,cum_regret` per trace and
// `round,mean_regret,std_regret,reps` for summaries; rounds are 1-based.
void write_trace_csv(std::ostream& os, const Trace& trace, const RegretRecord& reg);
void write_summary_csv(std::ostream& os, const MonteCarloSummary& summary);

}  // namespace ib
