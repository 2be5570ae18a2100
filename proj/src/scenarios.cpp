#include "ib/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ib/rng.hpp"

namespace ib {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void add_known(ScenarioMeta& meta, std::string quantity, double value,
               double tolerance, std::string note) {
  meta.known_values.push_back(
      {std::move(quantity), value, tolerance, std::move(note)});
}

Vec vecd(std::initializer_list<double> v) {
  Vec r((int)v.size());
  int i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

// All tuples over mixed radix `sizes`, last digit fastest.
std::vector<std::vector<int>> product_tuples(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(sizes.size(), 0);
  while (true) {
    out.push_back(cur);
    int i = (int)sizes.size() - 1;
    while (i >= 0 && ++cur[(size_t)i] == sizes[(size_t)i]) cur[(size_t)i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// finite_stochastic

Scenario finite_stochastic(const std::vector<std::vector<double>>& means_grid) {
  if (means_grid.empty() || means_grid[0].empty())
    throw DegenerateInput("finite_stochastic: empty grid");
  const int A = (int)means_grid[0].size();
  Scenario sc;
  sc.space = make_outcome_space(vecd({1, 1}), ConvexBody::simplex(2));
  sc.family.dim_Z = A + 1;
  sc.family.dim_W = 1;
  for (const auto& row : means_grid) {
    if ((int)row.size() != A)
      throw DimensionMismatch("finite_stochastic: ragged means grid");
    Vec theta = Vec::Zero(A + 1);
    for (int x = 0; x < A; ++x) {
      if (row[(size_t)x] < 0 || row[(size_t)x] > 1)
        throw DegenerateInput("finite_stochastic: mean outside [0,1]");
      theta(x) = -row[(size_t)x];
    }
    theta(A) = 1;
    sc.family.H_grid.push_back(theta);
  }
  for (int x = 0; x < A; ++x) {
    // F = theta_A * y1 + theta_x * (y0 + y1) = y1 - m_x on the simplex.
    Mat T = Mat::Zero(A + 1, 2);
    T(x, 0) = 1;
    T(x, 1) = 1;
    T(A, 1) = 1;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(vecd({(double)x}));
    sc.reward.c.push_back(vecd({0, 1}));
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "finite_stochastic";
  sc.meta.grid["num_arms"] = A;
  sc.meta.grid["num_hypotheses"] = (double)means_grid.size();
  add_known(sc.meta, "dim_W", 1, 0, "one mean constraint per arm");
  return sc;
}

Scenario finite_stochastic(const std::vector<double>& means) {
  return finite_stochastic(std::vector<std::vector<double>>{means});
}

// ---------------------------------------------------------------------------
// linear_bandit

Scenario linear_bandit(const std::vector<Vec>& arms,
                       const std::vector<Vec>& h_grid) {
  if (arms.empty() || h_grid.empty())
    throw DegenerateInput("linear_bandit: empty arm or hypothesis grid");
  const int D = (int)arms[0].size();
  Scenario sc;
  sc.space = make_outcome_space(vecd({1, 0}),
                                ConvexBody::segment(vecd({1, -1}), vecd({1, 1})));
  sc.family.dim_Z = D + 1;
  sc.family.dim_W = 1;
  for (const Vec& th : h_grid) {
    if ((int)th.size() != D)
      throw DimensionMismatch("linear_bandit: hypothesis dimension");
    Vec hom(D + 1);
    hom.head(D) = th;
    hom(D) = 1;
    sc.family.H_grid.push_back(hom);
  }
  for (const Vec& x : arms) {
    if ((int)x.size() != D)
      throw DimensionMismatch("linear_bandit: arm dimension");
    for (const Vec& th : h_grid)
      if (std::abs(x.dot(th)) > 1 + 1e-12)
        throw DegenerateInput("linear_bandit: |x.theta| must be <= 1");
    // f_matrix row at homogenized theta: (x.theta, -1).
    Mat T = Mat::Zero(D + 1, 2);
    for (int i = 0; i < D; ++i) T(i, 0) = x(i);
    T(D, 1) = -1;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(x);
    sc.reward.c.push_back(vecd({0, 1}));
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "linear_bandit";
  sc.meta.grid["num_arms"] = (double)arms.size();
  sc.meta.grid["num_hypotheses"] = (double)h_grid.size();
  add_known(sc.meta, "dim_W", 1, 0, "single linear mean constraint");
  return sc;
}

// ---------------------------------------------------------------------------
// dhk_torus

Scenario dhk_torus(int n, int arm_res, int h_res) {
  if (n < 1 || arm_res < 1 || h_res < 1)
    throw DegenerateInput("dhk_torus: positive n and resolutions required");
  auto embed = [n](const std::vector<int>& tuple, int res, double scale) {
    Vec v(2 * n);
    for (int i = 0; i < n; ++i) {
      double t = 2.0 * kPi * tuple[(size_t)i] / res;
      v(2 * i) = scale * std::cos(t);
      v(2 * i + 1) = scale * std::sin(t);
    }
    return v;
  };
  std::vector<Vec> arms, hyps;
  for (const auto& t : product_tuples(std::vector<int>((size_t)n, arm_res)))
    arms.push_back(embed(t, arm_res, 1.0));
  for (const auto& t : product_tuples(std::vector<int>((size_t)n, h_res)))
    hyps.push_back(embed(t, h_res, 1.0 / n));
  Scenario sc = linear_bandit(arms, hyps);
  sc.meta.name = "dhk_torus";
  sc.meta.grid = {{"n", (double)n},
                  {"arm_res", (double)arm_res},
                  {"h_res", (double)h_res}};
  add_known(sc.meta, "param_R", 2.0, 1e-3, "torus family norm ratio");
  add_known(sc.meta, "param_S", 1.0, 1e-9, "point credal sections");
  add_known(sc.meta, "param_C", 2.0, 1e-9, "reward range on the segment");
  add_known(sc.meta, "dim_W", 1, 0, "single linear mean constraint");
  return sc;
}

// ---------------------------------------------------------------------------
// rot_triangle

Scenario rot_triangle(int arm_res, int h_res) {
  if (arm_res < 4 || arm_res % 4 != 0 || h_res < 1 || arm_res % h_res != 0)
    throw DegenerateInput(
        "rot_triangle: arm_res must be a positive multiple of 4 and of h_res");
  Scenario sc;
  sc.space = make_outcome_space(vecd({1, 1, 1}), ConvexBody::simplex(3));
  sc.family.dim_Z = 2;
  sc.family.dim_W = 1;
  const Vec u = vecd({1, -1, 0}) / std::sqrt(2.0);
  const Vec v = vecd({1, 1, -2}) / std::sqrt(6.0);
  for (int j = 0; j < h_res; ++j) {
    double s = 2.0 * kPi * j / h_res;
    sc.family.H_grid.push_back(vecd({std::cos(s), std::sin(s)}));
  }
  for (int i = 0; i < arm_res; ++i) {
    double a = 2.0 * kPi * i / arm_res;
    // F(x, theta(s), y) = cos(a+s) u.y + sin(a+s) v.y: the section is the
    // chord through the triangle center orthogonal (in the hull plane) to
    // the direction at angle a+s.
    Mat T(2, 3);
    T.row(0) = (std::cos(a) * u + std::sin(a) * v).transpose();
    T.row(1) = (-std::sin(a) * u + std::cos(a) * v).transpose();
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(vecd({a}));
    sc.reward.c.push_back(vecd({0, 0, 1}));
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "rot_triangle";
  sc.meta.grid = {{"arm_res", (double)arm_res}, {"h_res", (double)h_res}};
  add_known(sc.meta, "optimal_value_each_theta", 1.0 / 3, 1e-8,
            "chord parallel to side 01 keeps the third label at 1/3");
  add_known(sc.meta, "dim_W", 1, 0, "one chord constraint");
  return sc;
}

// ---------------------------------------------------------------------------
// square_isometries

Scenario square_isometries(int h_res) {
  if (h_res < 1) throw DegenerateInput("square_isometries: h_res must be >= 1");
  Scenario sc;
  sc.space = make_outcome_space(vecd({1, 1, 1, 1}), ConvexBody::simplex(4));
  sc.family.dim_Z = 3;
  sc.family.dim_W = 2;
  for (int i = 0; i < h_res; ++i) {
    for (int j = 0; j < h_res; ++j) {
      sc.family.H_grid.push_back(
          vecd({(i + 0.5) / h_res, (j + 0.5) / h_res, 1.0}));
    }
  }
  // The dihedral group of the unit square acting around its center.
  std::vector<Mat> qs;
  Mat q(2, 2);
  q << 1, 0, 0, 1; qs.push_back(q);
  q << 0, -1, 1, 0; qs.push_back(q);
  q << -1, 0, 0, -1; qs.push_back(q);
  q << 0, 1, -1, 0; qs.push_back(q);
  q << 1, 0, 0, -1; qs.push_back(q);
  q << -1, 0, 0, 1; qs.push_back(q);
  q << 0, 1, 1, 0; qs.push_back(q);
  q << 0, -1, -1, 0; qs.push_back(q);
  const Vec center = vecd({0.5, 0.5});
  for (const Mat& Q : qs) {
    Vec d = center - Q * center;
    // (p, q) = Q(theta - c) + c; constraints y0+y1 = p/2 and y2 = q (y2+y3).
    Vec ap = vecd({Q(0, 0), Q(0, 1), d(0)});
    Vec aq = vecd({Q(1, 0), Q(1, 1), d(1)});
    Mat T0 = Vec::Unit(3, 2) * vecd({1, 1, 0, 0}).transpose() -
             0.5 * ap * vecd({1, 1, 1, 1}).transpose();
    Mat T1 = Vec::Unit(3, 2) * vecd({0, 0, 1, 0}).transpose() -
             aq * vecd({0, 0, 1, 1}).transpose();
    sc.family.F_tensor.push_back({T0, T1});
    Vec emb(6);
    emb << Q(0, 0), Q(0, 1), Q(1, 0), Q(1, 1), d(0), d(1);
    sc.family.arm_embed.push_back(emb);
    sc.reward.c.push_back(vecd({1, 0, 0, 0}));
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "square_isometries";
  sc.meta.grid = {{"h_res", (double)h_res}};
  add_known(sc.meta, "num_arms", 8, 0, "order of the dihedral group");
  add_known(sc.meta, "dim_W", 2, 0, "group and conditional constraints");
  add_known(sc.meta, "cond_block_sine", 1.0, 5e-2,
            "conditional-probability constraint has sine 1 on the simplex");
  return sc;
}

// ---------------------------------------------------------------------------
// hyperplane_scenario

Scenario hyperplane_scenario(int n, int m, int arm_res, int h_res) {
  if (n < 2 || m < 1 || n > m + 1 || arm_res < 1 || h_res < 1)
    throw DegenerateInput("hyperplane_scenario: need 2 <= n <= m+1");
  const double tau = 0.5;
  Scenario sc;
  Vec mu = Vec::Zero(m + 1);
  mu(m) = 1;
  sc.space = make_outcome_space(mu, ConvexBody::ball(m, m));
  sc.family.dim_Z = n;
  sc.family.dim_W = 1;
  // Rotation by `angle` in the (0, n-1) coordinate plane of R^n.
  auto rot = [n](double angle) {
    Mat R = Mat::Identity(n, n);
    R(0, 0) = std::cos(angle);
    R(0, n - 1) = -std::sin(angle);
    R(n - 1, 0) = std::sin(angle);
    R(n - 1, n - 1) = std::cos(angle);
    return R;
  };
  auto arc = [](int k, int res) {
    // res points on [-pi/8, pi/8]; the arc keeps every (arm, hypothesis)
    // pair feasible in the square (n = m+1) case.
    return res == 1 ? 0.0 : -kPi / 8 + (kPi / 4) * k / (res - 1);
  };
  for (int j = 0; j < h_res; ++j)
    sc.family.H_grid.push_back(rot(arc(j, h_res)) * Vec::Unit(n, 0));
  Mat B = Mat::Zero(n, m + 1);
  for (int i = 0; i < std::min(n, m); ++i) B(i, i) = 1;
  B(n - 1, m) = tau;
  for (int i = 0; i < arm_res; ++i) {
    Mat X = rot(arc(i, arm_res)) * B;
    sc.family.F_tensor.push_back({X});
    Vec emb(n * (m + 1));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < m + 1; ++c) emb(r * (m + 1) + c) = X(r, c);
    sc.family.arm_embed.push_back(emb);
    Vec c = Vec::Zero(m + 1);
    c(0) = 1;
    sc.reward.c.push_back(c);
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "hyperplane";
  sc.meta.grid = {{"n", (double)n},
                  {"m", (double)m},
                  {"arm_res", (double)arm_res},
                  {"h_res", (double)h_res},
                  {"tau", tau}};
  add_known(sc.meta, "dim_W", 1, 0, "scalar constraint space");
  if (n == m + 1) {
    // Invertible-case operator-norm bound: the arm operators are rotations
    // of a fixed B with max_e ||B e|| = sqrt(1 + tau^2) and inradius of the
    // image of the unit ball equal to tau, so R <= sqrt(1 + tau^2) / tau.
    add_known(sc.meta, "param_R_upper", std::sqrt(1 + tau * tau) / tau, 1e-6,
              "condition-number bound for invertible arm operators");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// moment_scenario

Scenario moment_scenario(int n, int h_res, int curve_samples) {
  if (n < 1 || h_res < 1 || curve_samples < 2)
    throw DegenerateInput("moment_scenario: need n >= 1, >= 2 curve samples");
  Mat V(n + 1, curve_samples);
  for (int k = 0; k < curve_samples; ++k) {
    double t = -1.0 + 2.0 * k / (curve_samples - 1);
    double p = 1;
    for (int i = 0; i <= n; ++i) {
      V(i, k) = p;
      p *= t;
    }
  }
  Scenario sc;
  Vec mu = Vec::Zero(n + 1);
  mu(0) = 1;
  sc.space = make_outcome_space(mu, ConvexBody::polytope(V));
  sc.family.dim_Z = 2;
  sc.family.dim_W = 1;
  for (int j = 0; j < h_res; ++j)
    sc.family.H_grid.push_back(vecd({-1.0 + 2.0 * (j + 0.5) / h_res, 1.0}));
  // Single arm; the constraint pins the first moment: y1 = theta y0.
  Mat T = Mat::Zero(2, n + 1);
  T(0, 0) = 1;
  T(1, 1) = -1;
  sc.family.F_tensor.push_back({T});
  sc.family.arm_embed.push_back(Vec::Zero(0));
  Vec c = Vec::Zero(n + 1);
  c(1) = 1;
  sc.reward.c.push_back(c);
  sc.reward.c0.push_back(0.0);
  sc.meta.name = "moment";
  sc.meta.grid = {{"n", (double)n},
                  {"h_res", (double)h_res},
                  {"curve_samples", (double)curve_samples}};
  add_known(sc.meta, "dim_W", 1, 0, "first-moment constraint");
  return sc;
}

// ---------------------------------------------------------------------------
// pcb_scenario

Scenario pcb_scenario(const PcbSpec& spec) {
  const int n = (int)spec.level_sizes.size();
  if (n < 1) throw DegenerateInput("pcb_scenario: at least one level");
  for (int s : spec.level_sizes)
    if (s < 1) throw DegenerateInput("pcb_scenario: empty level");
  const int P = (int)spec.prefixes.size();
  if ((int)spec.z_dims.size() != P || (int)spec.psi.size() != P)
    throw DimensionMismatch("pcb_scenario: per-prefix data sizes");
  const int A = (int)spec.arm_f.size();
  if (A < 1 || (int)spec.reward_per_outcome.size() != A)
    throw DimensionMismatch("pcb_scenario: per-arm data sizes");
  auto outcomes = product_tuples(spec.level_sizes);
  const int NB = (int)outcomes.size();
  std::vector<int> zoff((size_t)P, 0);
  int dim_Z = 0, dim_W = 0;
  for (int s = 0; s < P; ++s) {
    const auto& pre = spec.prefixes[(size_t)s];
    if ((int)pre.size() >= n)
      throw DegenerateInput("pcb_scenario: prefix as long as the sequence");
    for (int i = 0; i < (int)pre.size(); ++i)
      if (pre[(size_t)i] < 0 || pre[(size_t)i] >= spec.level_sizes[(size_t)i])
        throw IndexOutOfGrid("pcb_scenario: prefix digit out of range");
    if ((int)spec.psi[(size_t)s].size() != spec.z_dims[(size_t)s])
      throw DimensionMismatch("pcb_scenario: psi dimension");
    zoff[(size_t)s] = dim_Z;
    dim_Z += spec.z_dims[(size_t)s];
    dim_W += spec.level_sizes[(size_t)pre.size()] - 1;
  }
  Scenario sc;
  sc.space = make_outcome_space(Vec::Ones(NB), ConvexBody::simplex(NB));
  sc.family.dim_Z = dim_Z;
  sc.family.dim_W = dim_W;
  for (const Vec& th : spec.h_grid) {
    if ((int)th.size() != dim_Z)
      throw DimensionMismatch("pcb_scenario: hypothesis dimension");
    sc.family.H_grid.push_back(th);
  }
  auto is_prefix = [](const std::vector<int>& a, const std::vector<int>& b) {
    for (int i = 0; i < (int)a.size(); ++i)
      if (b[(size_t)i] != a[(size_t)i]) return false;
    return true;
  };
  for (int x = 0; x < A; ++x) {
    if ((int)spec.arm_f[(size_t)x].size() != P)
      throw DimensionMismatch("pcb_scenario: arm_f prefix count");
    if ((int)spec.reward_per_outcome[(size_t)x].size() != NB)
      throw DimensionMismatch("pcb_scenario: reward vector size");
    std::vector<Mat> tensor;
    for (int s = 0; s < P; ++s) {
      const auto& pre = spec.prefixes[(size_t)s];
      const int level = (int)pre.size();
      const int C = spec.level_sizes[(size_t)level];
      const Mat& f = spec.arm_f[(size_t)x][(size_t)s];
      if (f.rows() != C || f.cols() != spec.z_dims[(size_t)s])
        throw DimensionMismatch("pcb_scenario: arm_f block shape");
      // One W coordinate per (prefix, c) with the last c dropped: the rows
      // sum to zero over c, so dropping one keeps the same kernel.
      for (int c = 0; c + 1 < C; ++c) {
        Mat T = Mat::Zero(dim_Z, NB);
        for (int b = 0; b < NB; ++b) {
          if (!is_prefix(pre, outcomes[(size_t)b])) continue;
          Vec col = -f.row(c).transpose();
          if (outcomes[(size_t)b][(size_t)level] == c)
            col += spec.psi[(size_t)s];
          T.block(zoff[(size_t)s], b, spec.z_dims[(size_t)s], 1) = col;
        }
        tensor.push_back(std::move(T));
      }
    }
    sc.family.F_tensor.push_back(std::move(tensor));
    sc.family.arm_embed.push_back(x < (int)spec.arm_embed.size()
                                      ? spec.arm_embed[(size_t)x]
                                      : vecd({(double)x}));
    sc.reward.c.push_back(spec.reward_per_outcome[(size_t)x]);
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = spec.name;
  sc.meta.grid = {{"num_arms", (double)A},
                  {"num_outcomes", (double)NB},
                  {"num_prefixes", (double)P}};
  // Full-support conditionals: each conditional block has sine 1, so the
  // chained estimate is exact.
  sc.meta.sine_method = SineMethod::Chain;
  sc.meta.sine_opts.chain_components.assign((size_t)P, 1.0);
  add_known(sc.meta, "param_S", 1.0, 1e-12,
            "chained conditional-block sines (full support)");
  add_known(sc.meta, "param_R_upper", 4.0 * n, 1e-9,
            "chained norm bound in the sequence length");
  return sc;
}

// ---------------------------------------------------------------------------
// zerosum_scenario

Scenario zerosum_scenario(const std::vector<Mat>& payoffs, int x_grid) {
  if (payoffs.empty()) throw DegenerateInput("zerosum_scenario: no matrices");
  const int nb1 = (int)payoffs[0].rows(), nb2 = (int)payoffs[0].cols();
  if (nb1 < 1 || nb2 < 1 || x_grid < 1)
    throw DegenerateInput("zerosum_scenario: empty game or grid");
  for (const Mat& Pm : payoffs) {
    if (Pm.rows() != nb1 || Pm.cols() != nb2)
      throw DimensionMismatch("zerosum_scenario: matrix shapes differ");
    if (Pm.cwiseAbs().maxCoeff() > 1 + 1e-12)
      throw DegenerateInput("zerosum_scenario: payoffs must lie in [-1, 1]");
  }
  // Row-player mixed strategies with denominator x_grid (pure ones included).
  std::vector<Vec> strategies;
  std::vector<int> counts((size_t)nb1, 0);
  std::function<void(int, int)> enumerate = [&](int pos, int left) {
    if (pos == nb1 - 1) {
      counts[(size_t)pos] = left;
      Vec s(nb1);
      for (int i = 0; i < nb1; ++i) s(i) = (double)counts[(size_t)i] / x_grid;
      strategies.push_back(s);
      return;
    }
    for (int k = left; k >= 0; --k) {
      counts[(size_t)pos] = k;
      enumerate(pos + 1, left - k);
    }
  };
  enumerate(0, x_grid);

  PcbSpec spec;
  spec.name = "zerosum";
  spec.level_sizes = {nb2, nb1, 2};
  for (int b = 0; b < nb2; ++b) {
    spec.prefixes.push_back({b});
    spec.z_dims.push_back(1);
    spec.psi.push_back(vecd({1}));
  }
  for (int b = 0; b < nb2; ++b) {
    for (int a = 0; a < nb1; ++a) {
      spec.prefixes.push_back({b, a});
      spec.z_dims.push_back(2);
      spec.psi.push_back(vecd({1, 1}));
    }
  }
  for (const Mat& Pm : payoffs) {
    Vec th(nb2 + 2 * nb2 * nb1);
    int k = 0;
    for (int b = 0; b < nb2; ++b) th(k++) = 1;
    for (int b = 0; b < nb2; ++b) {
      for (int a = 0; a < nb1; ++a) {
        th(k++) = (1 - Pm(a, b)) / 2;
        th(k++) = (1 + Pm(a, b)) / 2;
      }
    }
    spec.h_grid.push_back(th);
  }
  const int NB = nb2 * nb1 * 2;
  Vec reward(NB);
  for (int v = 0; v < NB; ++v) reward(v) = (v % 2 == 0) ? -1.0 : 1.0;
  for (const Vec& x : strategies) {
    std::vector<Mat> blocks;
    for (int b = 0; b < nb2; ++b) blocks.push_back(x);
    for (int b = 0; b < nb2; ++b)
      for (int a = 0; a < nb1; ++a) blocks.push_back(Mat::Identity(2, 2));
    spec.arm_f.push_back(std::move(blocks));
    spec.arm_embed.push_back(x);
    spec.reward_per_outcome.push_back(reward);
  }
  Scenario sc = pcb_scenario(spec);
  sc.meta.grid["x_grid"] = (double)x_grid;
  sc.meta.grid["nb1"] = (double)nb1;
  sc.meta.grid["nb2"] = (double)nb2;

  ZeroSumMap zs;
  zs.nb1 = nb1;
  zs.nb2 = nb2;
  zs.pure_arm.assign((size_t)nb1, -1);
  for (int i = 0; i < (int)strategies.size(); ++i)
    for (int a = 0; a < nb1; ++a)
      if (std::abs(strategies[(size_t)i](a) - 1.0) < 1e-12)
        zs.pure_arm[(size_t)a] = i;
  for (int b = 0; b < nb2; ++b) {
    for (int a = 0; a < nb1; ++a) {
      for (int s = 0; s < 2; ++s) {
        zs.vertex_ab.push_back({a, b});
        zs.vertex_payoff.push_back(s == 0 ? -1.0 : 1.0);
      }
    }
  }
  sc.meta.zerosum = zs;
  add_known(sc.meta, "param_C", 2.0, 1e-9, "payoff signs span [-1, 1]");

  // Gap lower bound over qualifying ordered hypothesis pairs, mirroring the
  // conditions of the gap computation.
  const int H = (int)payoffs.size();
  if (H > 1) {
    std::vector<int> xstar((size_t)H);
    std::vector<double> me((size_t)H);
    auto game_me = [&](const Vec& x, const Mat& Pm) {
      double worst = std::numeric_limits<double>::infinity();
      for (int b = 0; b < nb2; ++b) worst = std::min(worst, x.dot(Pm.col(b)));
      return worst;
    };
    for (int h = 0; h < H; ++h) {
      int bx = 0;
      double bv = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < (int)strategies.size(); ++i) {
        double v = game_me(strategies[(size_t)i], payoffs[(size_t)h]);
        if (v > bv + 1e-12) {
          bv = v;
          bx = i;
        }
      }
      xstar[(size_t)h] = bx;
      me[(size_t)h] = bv;
    }
    double gt = std::numeric_limits<double>::infinity();
    for (int i = 0; i < H; ++i) {
      for (int j = 0; j < H; ++j) {
        if (i == j) continue;
        if (me[(size_t)j] < me[(size_t)i] - 1e-9) continue;
        const Vec& x = strategies[(size_t)xstar[(size_t)j]];
        if (game_me(x, payoffs[(size_t)i]) >= me[(size_t)i] - 1e-9) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (int b = 0; b < nb2; ++b) {
          double d = 0;
          for (int a = 0; a < nb1; ++a)
            d += x(a) *
                 std::abs(payoffs[(size_t)i](a, b) - payoffs[(size_t)j](a, b));
          worst = std::min(worst, d);
        }
        gt = std::min(gt, 0.5 * worst);
      }
    }
    if (std::isfinite(gt) && gt > 0)
      add_known(sc.meta, "gap_lower", gt, 1e-9,
                "half the minimal column-wise expected payoff difference");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// traffic_abcde

Scenario traffic_abcde(double tau_min, double tau_max, int grid) {
  if (!(tau_min > 0) || !(tau_max >= tau_min) || grid < 1)
    throw DegenerateInput("traffic_abcde: need 0 < tau_min <= tau_max");
  Scenario sc;
  // Outcomes (1, y_AB, y_AC, y_DE) with the trip shares in [0,1]^3.
  Mat V(4, 8);
  for (int k = 0; k < 8; ++k) {
    V(0, k) = 1;
    V(1, k) = (k >> 0) & 1;
    V(2, k) = (k >> 1) & 1;
    V(3, k) = (k >> 2) & 1;
  }
  sc.space = make_outcome_space(vecd({1, 0, 0, 0}), ConvexBody::polytope(V));
  sc.family.dim_Z = 3;
  sc.family.dim_W = 2;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      // (theta_DE, theta_A, 1); theta_A ranges over (0, 2).
      sc.family.H_grid.push_back(
          vecd({(i + 0.5) / grid, 2.0 * (j + 0.5) / grid, 1.0}));
    }
  }
  Mat T0 = Mat::Zero(3, 4);
  T0(2, 3) = 1;   // E[y_DE]
  T0(0, 0) = -1;  // - theta_DE
  Mat T1 = Mat::Zero(3, 4);
  T1(2, 1) = 1;   // E[y_AB]
  T1(2, 2) = 1;   // + E[y_AC]
  T1(1, 0) = -1;  // - theta_A
  std::vector<double> taus;
  for (int k = 0; k < grid; ++k)
    taus.push_back(grid == 1 ? tau_min
                             : tau_min + (tau_max - tau_min) * k / (grid - 1));
  for (double bg : taus) {
    for (double br : taus) {
      for (double cg : taus) {
        for (double cr : taus) {
          sc.family.F_tensor.push_back({T0, T1});
          sc.family.arm_embed.push_back(vecd({bg, br, cg, cr}));
          // Expected waiting-time reward: -(1/2) per-road red-time shares.
          double wab = br * br / (bg + br);
          double wac = cr * cr / (cg + cr);
          double wde = bg * bg / (bg + br) + cg * cg / (cg + cr);
          sc.reward.c.push_back(vecd({0, -0.5 * wab, -0.5 * wac, -0.5 * wde}));
          sc.reward.c0.push_back(0.0);
        }
      }
    }
  }
  sc.meta.name = "traffic_abcde";
  sc.meta.grid = {{"tau_min", tau_min},
                  {"tau_max", tau_max},
                  {"grid", (double)grid}};
  add_known(sc.meta, "dim_W", 2, 0, "two aggregate mean constraints");
  return sc;
}

// ---------------------------------------------------------------------------
// lower_s_scenario

Scenario lower_s_scenario(int D, double alpha, int h_res) {
  if (D < 1 || h_res < 1 || !(alpha > 0 && alpha <= 0.25))
    throw DegenerateInput("lower_s_scenario: need D >= 1, alpha in (0, 1/4]");
  std::vector<Vec> us;
  if (D == 1) {
    us.push_back(vecd({1}));
    if (h_res > 1) us.push_back(vecd({-1}));
  } else if (D == 2) {
    for (int j = 0; j < h_res; ++j) {
      double t = 2.0 * kPi * j / h_res;
      us.push_back(vecd({std::cos(t), std::sin(t)}));
    }
  } else {
    Rng rng(12345);
    for (int j = 0; j < h_res; ++j) {
      Vec u(D);
      for (int i = 0; i < D; ++i) u(i) = rng.normal();
      us.push_back(u / u.norm());
    }
  }
  Scenario sc;
  Vec mu = Vec::Zero(D + 2);
  mu(0) = mu(1) = 1;
  sc.space = make_outcome_space(mu, ConvexBody::cone_ball(D, alpha));
  sc.family.dim_Z = D + 2;
  sc.family.dim_W = 1;
  for (const Vec& u : us) {
    Vec th(D + 2);
    th(0) = 1 - alpha;
    th(1) = -alpha;
    th.tail(D) = 2 * alpha * u;
    sc.family.H_grid.push_back(th);
  }
  std::vector<Vec> arms;
  auto push_arm = [&](const Vec& x) {
    for (const Vec& e : arms)
      if ((e - x).lpNorm<Eigen::Infinity>() < 1e-12) return;
    arms.push_back(x);
  };
  for (const Vec& u : us) push_arm(Vec(-u));
  for (const Vec& u : us) push_arm(u);
  Mat T = Mat::Identity(D + 2, D + 2);
  for (const Vec& x : arms) {
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(x);
    Vec c = Vec::Zero(D + 2);
    c.tail(D) = x;
    sc.reward.c.push_back(c);
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "lower_s";
  sc.meta.grid = {{"D", (double)D}, {"alpha", alpha}, {"h_res", (double)h_res}};
  add_known(sc.meta, "param_R", 1.0, 5e-3, "normalized cone family");
  add_known(sc.meta, "param_S", 2 * alpha / std::sqrt(1 + 4 * alpha * alpha),
            5e-2, "cone section sine in the rescaled metric");
  add_known(sc.meta, "me_x_star", -0.5, 1e-3,
            "value at the antipodal arm of the hypothesis direction");
  return sc;
}

// ---------------------------------------------------------------------------
// lower_r_scenario

Scenario lower_r_scenario(double lambda, double alpha, int arm_res, int h_res) {
  if (!(lambda > 0) || !(alpha > 3 * kPi / 8 && alpha < kPi / 2) ||
      arm_res < 1 || h_res < 1)
    throw DegenerateInput(
        "lower_r_scenario: need lambda > 0, alpha in (3pi/8, pi/2)");
  const double lo = alpha - kPi / 2, hi = kPi / 2 - alpha;
  auto angle = [&](int k, int res) {
    return res == 1 ? 0.0 : lo + (hi - lo) * k / (res - 1);
  };
  Scenario sc;
  sc.space = make_outcome_space(vecd({0, 0, 1}), ConvexBody::ball(2, 2));
  sc.family.dim_Z = 2;
  sc.family.dim_W = 1;
  for (int j = 0; j < h_res; ++j) {
    double s = angle(j, h_res);
    sc.family.H_grid.push_back(vecd({std::cos(s), std::sin(s)}));
  }
  for (int i = 0; i < arm_res; ++i) {
    double t = angle(i, arm_res);
    Vec x = vecd({-std::sin(t), std::cos(t)});
    // F(x, theta, y) = theta^T (I + lambda x x^T) (y0, y1).
    Mat M = Mat::Identity(2, 2) + lambda * x * x.transpose();
    Mat T = Mat::Zero(2, 3);
    T.leftCols(2) = M;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(x);
    sc.reward.c.push_back(vecd({-1, 0, 0}));
    sc.reward.c0.push_back(0.0);
  }
  sc.meta.name = "lower_r";
  sc.meta.grid = {{"lambda", lambda},
                  {"alpha", alpha},
                  {"arm_res", (double)arm_res},
                  {"h_res", (double)h_res}};
  add_known(sc.meta, "param_S", 1.0, 1e-9, "chords through the disc center");
  add_known(sc.meta, "param_R_upper", lambda + 1, 1e-6,
            "largest stretch of the arm operators");
  add_known(sc.meta, "dim_W", 1, 0, "one tilted mean constraint");
  return sc;
}

Scenario pcb_desk_example() {
  // Two-level sequences over {0,1} x {0,1}: the root marginal is theta's
  // first block routed through an arm-dependent permutation, and each
  // level-1 conditional is theta's matching block directly.
  PcbSpec spec;
  spec.name = "pcb_desk";
  spec.level_sizes = {2, 2};
  spec.prefixes = {{}, {0}, {1}};
  spec.z_dims = {2, 2, 2};
  spec.psi = {vecd({1, 1}), vecd({1, 1}), vecd({1, 1})};
  Mat id = Mat::Identity(2, 2);
  Mat swap(2, 2);
  swap << 0, 1, 1, 0;
  spec.arm_f = {{id, id, id}, {swap, id, id}};
  spec.h_grid = {vecd({0.3, 0.7, 0.5, 0.5, 0.8, 0.2}),
                 vecd({0.6, 0.4, 0.25, 0.75, 0.1, 0.9})};
  spec.reward_per_outcome = {vecd({1, 0, 0.5, -1}), vecd({1, 0, 0.5, -1})};
  return pcb_scenario(spec);
}

}  // namespace ib
