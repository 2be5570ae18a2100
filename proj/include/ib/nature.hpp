#pragma once
// Nature policies (adversaries): every response distribution has mean inside
// the credal section of the true hypothesis at the played arm.  Includes the
// two explicit lower-bound constructions.

#include <cstdint>
#include <memory>
#include <vector>

#include "ib/rng.hpp"
#include "ib/scenario.hpp"

namespace ib {

class NaturePolicy {
 public:
  virtual ~NaturePolicy() = default;
  // The scenario must outlive the policy between reset calls.
  virtual void reset(const Scenario& sc, const Vec& theta, std::uint64_t seed) = 0;
  // Outcome for the played arm; stateful (the lower-bound policies carry
  // mode flags derived from the history of arms and outcomes).
  virtual Vec respond(int x) = 0;
};

// Per-round worst case: argmin_y r(x, y) over the credal section.  On simplex
// bodies samples a label vertex with the argmin distribution as weights; on
// other bodies returns the argmin point itself.
std::unique_ptr<NaturePolicy> greedy_adversary();

// Stochastic environment with a fixed per-arm mean.  Means are validated
// against the credal sections at reset (IncompatibleMean).  Simplex bodies
// vertex-sample around the mean; other bodies return the mean.
std::unique_ptr<NaturePolicy> fixed_mean_nature(std::vector<Vec> mean_map);

struct LowerSParams {
  double alpha = 0.25;   // in (0, 1/4]
  double delta = 0.25;   // in (0, 1/2)
  Vec u_star;            // unit vector in R^D
};

// Two-point Bernoulli policy over {y_delta(x), y_perp} while every played
// arm satisfies u*.x >= -1/(1+2 delta) and y_perp never occurred; afterwards
// the deterministic mean outcome y_0(x).
std::unique_ptr<NaturePolicy> lower_s_adversary(const LowerSParams& p);

struct LowerRParams {
  double lambda = 1.0;       // > 0
  double alpha = 0.45 * 3.141592653589793;  // in (3 pi/8, pi/2)
  double psi = 0.0;          // in (pi/4, alpha); <= 0 selects a valid default
  double delta = 0.0;        // in (0,1), > 1/((lambda+1) tan(alpha+psi-pi/2));
                             // <= 0 selects a valid default
  Vec theta_star;            // unit vector in R^2, |theta1| <= cos(alpha)
};

// Bernoulli policy over {y+, y-} with P[y+] = (1 + tan(beta(x))/tan(psi))/2,
// beta(x) the angle of (I + lambda x x^T) theta*; switches permanently to a
// deterministic zero-information outcome once some played arm has
// |x.theta*| <= delta.
std::unique_ptr<NaturePolicy> lower_r_adversary(const LowerRParams& p);

struct AuditRow {
  int arm = 0;
  long samples = 0;
  Vec mean;        // empirical mean outcome
  Vec f_residual;  // F_{x,theta*} applied to the mean
  Vec tolerance;   // 4 sigma / sqrt(n) per W-coordinate
  bool pass = true;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  bool pass = true;
};

// Empirically checks the compatibility invariant: per grid arm, the mean of
// `rounds` x `reps` sampled responses must satisfy F_{x,theta*}(mean) = 0
// within 4 standard errors (coordinate-wise).
AuditReport compatibility_audit(NaturePolicy& nature, const Scenario& sc,
                                const Vec& theta, int rounds, int reps,
                                std::uint64_t seed);

}  // namespace ib
