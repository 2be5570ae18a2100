#pragma once
// Builders for the worked examples: each returns a Scenario whose metadata
// carries grid resolutions and independently-known check values.

#include <string>
#include <vector>

#include "ib/scenario.hpp"

namespace ib {

// Finite stochastic bandit over two-label outcomes.  Row h of `means_grid`
// lists, per arm, the hypothesis-h success probability; the credal section
// pins the outcome distribution to (1 - m, m).  Reward = success indicator.
Scenario finite_stochastic(const std::vector<std::vector<double>>& means_grid);
// Single-hypothesis convenience overload.
Scenario finite_stochastic(const std::vector<double>& means);

// Stochastic linear bandit: outcomes (1, t), t in [-1, 1]; hypothesis
// vectors are homogenized with a trailing 1 so the constraint row reads
// (x.theta, -1).  Every |x.theta| must be <= 1.
Scenario linear_bandit(const std::vector<Vec>& arms, const std::vector<Vec>& h_grid);

// Torus-arm linear bandit: arms on a product of n unit circles (arm_res
// points per circle), hypotheses on the rescaled torus (1/n) A (h_res points
// per circle).  Known values: R = 2, S = 1, C = 2.
Scenario dhk_torus(int n, int arm_res, int h_res);

// Three-label triangle with line-section credal sets at angle x + theta
// through the center; reward = probability of label 2.  arm_res and h_res
// grid [0, 2 pi); multiples of 4 keep the optimal arm on the grid.
Scenario rot_triangle(int arm_res, int h_res);

// Eight square isometries acting on theta in [0,1]^2; four-label outcomes
// with P({0,1}) = p/2 and P(2 | {2,3}) = q where (p, q) = x(theta).
// h_res grids each coordinate of the hypothesis square at cell centers.
Scenario square_isometries(int h_res);

// Mean-on-a-hyperplane scenario with ball outcomes in R^m and hypothesis
// dimension n: arms are full-rank n x (m+1) matrices X with theta^T X
// (y, 1) = 0 defining the section.  Arms and hypotheses are deterministic
// grids of the given resolutions.  Reward = first outcome coordinate.
Scenario hyperplane_scenario(int n, int m, int arm_res, int h_res);

// Moment-curve body (1, t, ..., t^n) sampled at `curve_samples` uniform
// t in [-1, 1] (endpoints included); hypotheses pin the first moment.
Scenario moment_scenario(int n, int h_res, int curve_samples = 65);

// Partial conditional bandit: sequence outcomes over levels C_0 x ... x
// C_{n-1}; for each listed prefix the conditional next-element distribution
// is f[prefix](x, theta_prefix).
struct PcbSpec {
  std::vector<int> level_sizes;             // |C_i| per level
  std::vector<std::vector<int>> prefixes;   // the set S, each entry a digit string
  std::vector<int> z_dims;                  // dim Z_a per prefix
  std::vector<Vec> psi;                     // psi_a per prefix
  // Per arm, per prefix: matrix |C_{|a|}| x z_dims[s] mapping z to the
  // conditional distribution coefficients f_a(x, z).
  std::vector<std::vector<Mat>> arm_f;
  std::vector<Vec> arm_embed;               // optional descriptors (may be empty)
  std::vector<Vec> h_grid;                  // stacked theta blocks per hypothesis
  std::vector<Vec> reward_per_outcome;      // per arm: r0(x, b) over outcomes b
  std::string name = "pcb";
};

Scenario pcb_scenario(const PcbSpec& spec);

// Small worked two-level instance of pcb_scenario (two arms differing by a
// root-marginal permutation, two hypotheses); used as the CLI sample.
Scenario pcb_desk_example();

// Traffic-lights scenario: arms grid the four light durations over
// [tau_min, tau_max] (grid points per coordinate), outcomes are homogenized
// trip counts (1, y_AB, y_AC, y_DE) in [0,1]^3, hypotheses fix E[y_DE] and
// E[y_AB + y_AC] on a grid of cell centers.
Scenario traffic_abcde(double tau_min, double tau_max, int grid);

// Zero-sum matrix game with bandit feedback as a partial conditional bandit:
// outcomes (b, a, sigma) with sigma in {-1, +1}; one hypothesis per payoff
// matrix; arms grid the row player's mixed strategies (x_grid points per
// simplex edge, pure strategies always included).  Meta carries the decode
// tables for matrix-game agents.
Scenario zerosum_scenario(const std::vector<Mat>& payoffs, int x_grid);

// The scaling-with-S lower bound construction: cone body in R^{D+2},
// hypotheses theta(u) = (1-alpha, -alpha, 2 alpha u) over h_res deterministic
// unit vectors u, arms include the antipodes -u of every gridded u.
Scenario lower_s_scenario(int D, double alpha, int h_res);

// The scaling-with-R lower bound construction: disc body, arms and
// hypotheses on the admissible angle ranges (res points each),
// F(x,z,y) = z^T (I + lambda x x^T) (y0, y1).
Scenario lower_r_scenario(double lambda, double alpha, int arm_res, int h_res);

// JSON round-trip for scenarios (schema documented in the README).
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);

}  // namespace ib
