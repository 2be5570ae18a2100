// End-to-end acceptance suite: geometry oracles, certificate values, model
// closed forms, IUCB behavior, concentration bounds, adversary mechanics,
// baseline agents, and CLI determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "ib/agents.hpp"
#include "ib/certificates.hpp"
#include "ib/model.hpp"
#include "ib/nature.hpp"
#include "ib/numkit.hpp"
#include "ib/rng.hpp"
#include "ib/scenarios.hpp"
#include "ib/sim.hpp"

using namespace ib;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Vec vec(std::initializer_list<double> v) {
  Vec out((int)v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vec random_vec(Rng& rng, int d, double lo = -1, double hi = 1) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// 1. Geometry oracles.

TEST_CASE("norms: axioms, hull norm on the simplex, simplex distance formula") {
  Rng rng(101);
  Mat hull_verts(4, 8);
  hull_verts.leftCols(4) = Mat::Identity(4, 4);
  for (int j = 4; j < 8; ++j) hull_verts.col(j) = random_vec(rng, 4);
  struct Spec {
    NormSpec n;
    int dim;
  };
  std::vector<Spec> specs = {
      {NormSpec::l1(), 6},
      {NormSpec::l2(), 6},
      {NormSpec::linf(), 6},
      {NormSpec::max_of({{{0, 1, 2}, NormSpec::l1()}, {{3, 4, 5}, NormSpec::l2()}}), 6},
      {NormSpec::hull(hull_verts), 4},
  };
  for (const Spec& s : specs) {
    for (int t = 0; t < 1000; ++t) {
      Vec u = random_vec(rng, s.dim), v = random_vec(rng, s.dim);
      const double nu = norm_eval(s.n, u), nv = norm_eval(s.n, v);
      CHECK(nu > 0);  // random vectors are nonzero a.s.
      const double a = rng.uniform(-2, 2);
      CHECK(norm_eval(s.n, a * u) == doctest::Approx(std::abs(a) * nu).epsilon(1e-8));
      CHECK(norm_eval(s.n, u + v) <= nu + nv + 1e-8);
    }
    CHECK(norm_eval(s.n, Vec::Zero(s.dim)) == doctest::Approx(0.0));
  }

  // The hull norm of the standard simplex vertices is the l1 norm.
  NormSpec simplex_hull = NormSpec::hull(Mat::Identity(5, 5));
  for (int t = 0; t < 100; ++t) {
    Vec v = random_vec(rng, 5, -2, 2);
    CHECK(norm_eval(simplex_hull, v) ==
          doctest::Approx(norm_eval(NormSpec::l1(), v)).epsilon(1e-8));
  }

  // Closed-form l1 distance to the simplex agrees with the LP projection.
  // The closed form lives on the affine hull sum(y) = 1.
  ConvexBody simplex4 = ConvexBody::simplex(4);
  for (int t = 0; t < 500; ++t) {
    Vec y = random_vec(rng, 4, -1, 2);
    y.array() += (1.0 - y.sum()) / 4.0;
    CHECK(l1_dist_to_simplex(y) ==
          doctest::Approx(dist_point_to_body(NormSpec::l1(), y, simplex4))
              .epsilon(1e-8)
              .scale(1.0));
  }
}

// ---------------------------------------------------------------------------
// 2. Sine estimates.

TEST_CASE("sines: conditional sections, probability systems, balls, chains") {
  const int labels = 5;
  Rng rng(2024);
  std::vector<double> cond_sines;
  for (int inst = 0; inst < 5; ++inst) {
    // Random conditional assessment P(E' | E) = p with both E∩E' and E\E'
    // nonempty; the section's sine relative to the simplex is 1.
    std::vector<int> E, Eo;
    bool ok = false;
    while (!ok) {
      E.clear();
      Eo.clear();
      for (int l = 0; l < labels; ++l) {
        if (rng.bernoulli(0.5)) E.push_back(l);
        if (rng.bernoulli(0.5)) Eo.push_back(l);
      }
      int inter = 0, diff = 0;
      for (int l : E) {
        if (std::find(Eo.begin(), Eo.end(), l) != Eo.end())
          ++inter;
        else
          ++diff;
      }
      ok = inter > 0 && diff > 0;
    }
    const double p = rng.uniform(0.2, 0.8);
    Vec c = Vec::Zero(labels);
    for (int l : E)
      c(l) = (std::find(Eo.begin(), Eo.end(), l) != Eo.end()) ? (1 - p) : -p;
    Mat A(2, labels);
    A.row(0) = c.transpose();
    A.row(1) = Mat::Ones(1, labels);
    const double bf = sine_bruteforce(AffineSubspace(A, vec({0, 1})),
                                      ConvexBody::simplex(labels),
                                      NormSpec::l1(), 20000, 50 + inst);
    CHECK(bf >= 0.99);
    cond_sines.push_back(bf);
  }

  // Logically independent event systems: sine >= 1/|F|.
  for (int F : {2, 3}) {
    const int bits = (F == 2) ? 2 : 3;
    const int nlab = 1 << bits;
    Mat A(F + 1, nlab);
    Vec b = Vec::Zero(F + 1);
    for (int i = 0; i < F; ++i) {
      const double p = 0.3 + 0.1 * i;
      for (int l = 0; l < nlab; ++l) A(i, l) = (((l >> i) & 1) ? 1.0 : 0.0) - p;
    }
    A.row(F) = Mat::Ones(1, nlab);
    b(F) = 1;
    const double bf = sine_bruteforce(AffineSubspace(A, b),
                                      ConvexBody::simplex(nlab),
                                      NormSpec::l1(), 20000, 5);
    CHECK(bf >= 1.0 / F - 1e-2);
  }

  // Ball sections: brute force vs the sqrt(1 - rho^2) closed form.
  ConvexBody ball = ConvexBody::ball(2, 2);
  for (double off : {0.0, 0.6}) {
    Mat A(2, 3);
    A << 0, 1, 0, 0, 0, 1;  // {y1 = off, y2 = 1}
    const double bf = sine_bruteforce(AffineSubspace(A, vec({off, 1})), ball,
                                      NormSpec::l2(), 20000, 11);
    Mat Ap(1, 2);
    Ap << 0, 1;
    Vec boff(1);
    boff << off;
    const double cf = sine_ball(AffineSubspace(Ap, boff));
    CHECK(bf == doctest::Approx(cf).epsilon(5e-2).scale(1.0));
  }

  // Two-stage chains compose by the minimum.
  CHECK(sine_chain({cond_sines[0], cond_sines[1]}) ==
        doctest::Approx(std::min(cond_sines[0], cond_sines[1])));
  CHECK(sine_chain({0.7, 0.4}) == doctest::Approx(0.4));
  CHECK(sine_chain({cond_sines[2], 1.0}) >= 0.99);
}

// ---------------------------------------------------------------------------
// 3. Certificate values on the shipped scenarios.

TEST_CASE("certificates: known R and S values for the shipped scenarios") {
  Scenario dhk = dhk_torus(2, 8, 4);
  CHECK(param_R(dhk.family, dhk.space) == doctest::Approx(2.0).epsilon(1e-3));

  const double alpha = 0.1;
  Scenario ls = lower_s_scenario(4, alpha, 6);
  CHECK(param_R(ls.family, ls.space) == doctest::Approx(1.0).epsilon(1e-3));
  auto [S_ls, note_ls] = param_S(ls.family, ls.space, ls.meta.sine_method,
                                 ls.meta.sine_opts);
  const double cone_cf = 2 * alpha / std::sqrt(1 + 4 * alpha * alpha);
  CHECK(S_ls == doctest::Approx(cone_cf).epsilon(1e-6));
  CHECK(S_ls / alpha >= 0.5);
  CHECK(S_ls / alpha <= 4.0);

  Scenario lr = lower_r_scenario(10.0, 1.3, 6, 6);
  auto [S_lr, note_lr] = param_S(lr.family, lr.space, lr.meta.sine_method,
                                 lr.meta.sine_opts);
  CHECK(S_lr == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(param_R(lr.family, lr.space) <= 11.0 + 1e-6);

  Scenario pcb = pcb_desk_example();  // two levels
  CHECK(param_R(pcb.family, pcb.space) <= 4.0 * 2 + 1e-6);
  auto [S_pcb, note_pcb] = param_S(pcb.family, pcb.space, pcb.meta.sine_method,
                                   pcb.meta.sine_opts);
  CHECK(S_pcb == doctest::Approx(1.0));
  CHECK(note_pcb.find("chain") != std::string::npos);
}

// ---------------------------------------------------------------------------
// 4. Model values.

TEST_CASE("model: rotating-triangle value, zero-sum previsions, game value") {
  Scenario rt = rot_triangle(8, 4);
  auto [arm, value] = optimal_arm(rt.family, rt.reward, rt.space,
                                  rt.family.H_grid[0]);
  CHECK(value == doctest::Approx(1.0 / 3).epsilon(1e-6));

  // The lower prevision of a mixed strategy equals the worst pure response.
  Rng rng(99);
  for (int inst = 0; inst < 20; ++inst) {
    Mat P(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) P(i, j) = rng.uniform(-1, 1);
    Scenario g = zerosum_scenario({P}, 4);
    for (int x = 0; x < g.family.num_arms(); ++x) {
      const Vec& w = g.family.arm_embed[(size_t)x];
      double ref = std::numeric_limits<double>::infinity();
      for (int b = 0; b < 3; ++b) ref = std::min(ref, w.dot(P.col(b)));
      CHECK(lower_prevision(g.family, g.reward, g.space, x, g.family.H_grid[0]) ==
            doctest::Approx(ref).epsilon(1e-8).scale(1.0));
    }
  }

  Mat pennies(2, 2);
  pennies << 1, -1, -1, 1;
  CHECK(std::abs(game_value(pennies).first) <= 1e-9);
}

// ---------------------------------------------------------------------------
// 5a. IUCB confidence-set mechanics.

namespace {

// Replays episodes while tracking the cycle average externally and checks,
// at every round, that the confidence set only shrinks and that cycle ends
// contract it below rho / (2 (D_Z + 1)).
int check_contraction(const Scenario& sc, double eta, int N, int seeds,
                      std::uint64_t base) {
  int cycle_ends = 0;
  auto [A, b] = sc.space.body.hull_constraints();
  const bool hull = A.rows() > 0;
  Mat AAti;
  if (hull) AAti = (A * A.transpose()).inverse();
  for (int s = 0; s < seeds; ++s) {
    IUCBAgent ag(eta);
    auto nat = greedy_adversary();
    ag.reset(sc, N, 1);
    nat->reset(sc, sc.family.H_grid[0], base + (std::uint64_t)s);
    Vec sum_y = Vec::Zero(sc.space.dim_Y);
    int tau = 0, cycles = 0;
    for (int t = 0; t < N; ++t) {
      const int arm = ag.select_arm();
      Vec y = nat->respond(arm);
      std::vector<int> before = ag.confidence_set();
      ag.observe(y);
      ++tau;
      sum_y += y;
      const std::vector<int>& after = ag.confidence_set();
      CHECK(subset_of(after, before));
      if (ag.cycle_count() > cycles) {
        ++cycle_ends;
        cycles = ag.cycle_count();
        Vec ybar = sum_y / tau;
        if (hull) ybar -= A.transpose() * (AAti * (A * ybar - b));
        const double bound = ag.last_rho() / (2.0 * (sc.family.dim_Z + 1));
        for (int h : after) {
          const double d = dz_distance(ag.zbar(), sc.family,
                                       sc.family.H_grid[(size_t)h], arm, ybar);
          CHECK(d <= bound + 1e-9);
        }
        tau = 0;
        sum_y.setZero();
      }
    }
  }
  return cycle_ends;
}

}  // namespace

TEST_CASE("iucb: confidence sets are monotone and contract at cycle ends") {
  Scenario fin = finite_stochastic({{0.2, 0.8}, {0.7, 0.3}, {0.5, 0.5}});
  CHECK(check_contraction(fin, 0.05, 80, 17, 100) >= 10);

  Scenario rt = rot_triangle(8, 4);
  CHECK(check_contraction(rt, 0.05, 80, 17, 200) >= 10);

  Mat P1(2, 2), P2(2, 2);
  P1 << 1, -1, -1, 1;
  P2 << 0.4, 0.4, -1, -1;
  Scenario zs = zerosum_scenario({P1, P2}, 4);
  CHECK(check_contraction(zs, 0.5, 80, 16, 300) >= 10);
}

// ---------------------------------------------------------------------------
// 5b/5c. Truth retention and bound dominance at the recommended eta.

TEST_CASE("iucb: truth retention and simplex-bound dominance on the pcb run") {
  Scenario pcb = pcb_desk_example();
  const Vec truth = pcb.family.H_grid[0];
  const int N = 500, reps = 200;

  IUCBAgent ag;  // derives the simplex-recommended eta at reset
  auto nat = greedy_adversary();
  int retained = 0;
  MonteCarloSummary mc = monte_carlo(
      ag, *nat, pcb, truth, N, reps, 7000,
      [&](int, const Trace& tr, const RegretRecord&) {
        const std::vector<int>& C = ag.confidence_set();
        if (std::find(C.begin(), C.end(), tr.theta_index) != C.end()) ++retained;
      });
  CHECK(retained >= (int)(0.95 * reps));

  Certificates cert;
  cert.R = param_R(pcb.family, pcb.space);
  cert.S = param_S(pcb.family, pcb.space, pcb.meta.sine_method,
                   pcb.meta.sine_opts)
               .first;
  cert.C = param_C(pcb.reward, pcb.space);
  BoundDims dims{pcb.family.dim_Z, pcb.family.dim_W};
  const double bound = bound_simplex(cert, dims, N, ag.eta(), 1.0 / N,
                                     pcb.space.body.labels);
  CHECK(mc.mean_regret(N - 1) <= bound);
}

// ---------------------------------------------------------------------------
// 5d. Log-like regret growth on a positive-gap zero-sum scenario.

TEST_CASE("iucb: regret growth flattens after identification under a gap") {
  Mat P1(2, 2), P2(2, 2);
  P1 << 1, -1, -1, 1;
  P2 << 0.4, 0.4, -1, -1;
  Scenario zs = zerosum_scenario({P1, P2}, 4);
  CHECK(gap_compute(zs.family, zs.reward, zs.space) >= 0.3);

  IUCBAgent ag(0.5);
  auto nat = greedy_adversary();
  MonteCarloSummary mc = monte_carlo(ag, *nat, zs, zs.family.H_grid[0], 500,
                                     100, 1000);
  const double inc1 = mc.mean_regret(249);
  const double inc2 = mc.mean_regret(499) - mc.mean_regret(249);
  CHECK(inc1 > 0);
  CHECK(inc2 <= 0.25 * inc1);
}

// ---------------------------------------------------------------------------
// 6. Concentration experiments.

TEST_CASE("concentration: simplex bound dominates and rates fall with tau") {
  Scenario sc = finite_stochastic(std::vector<double>{0.5});
  const Vec theta = sc.family.H_grid[0];
  auto nat = fixed_mean_nature({vec({0.5, 0.5})});

  ConcentrationResult dom =
      concentration_experiment(sc, theta, *nat, 0, 400, 0.3, 2000, 21);
  CHECK(dom.empirical_rate <= dom.simplex_bound);

  double prev = 1.0, prev_sigma = 0.0;
  for (int tau : {50, 200, 800}) {
    ConcentrationResult r =
        concentration_experiment(sc, theta, *nat, 0, tau, 0.1, 2000, 22);
    const double sigma =
        std::sqrt(std::max(r.empirical_rate * (1 - r.empirical_rate), 1e-6) / 2000);
    CHECK(r.empirical_rate <= prev + prev_sigma + sigma);
    prev = r.empirical_rate;
    prev_sigma = sigma;
  }
}

// ---------------------------------------------------------------------------
// 7. Lower-bound adversary mechanics.

TEST_CASE("adversaries: two-point probabilities, in-mode rewards, audits") {
  // Scaling-with-S policy: in Bernoulli mode the y_delta probability exceeds
  // (1 - alpha) / (1 + 2 alpha) at every admissible grid arm.
  const int D = 4;
  const double alpha = 0.1, delta = 0.25;
  Scenario ls = lower_s_scenario(D, alpha, 6);
  const Vec theta = ls.family.H_grid[0];
  Vec u_star = theta.tail(D) / (2 * alpha);
  LowerSParams sp;
  sp.alpha = alpha;
  sp.delta = delta;
  sp.u_star = u_star;
  const double floor_p = (1 - alpha) / (1 + 2 * alpha);
  int admissible = 0;
  for (int x = 0; x < ls.family.num_arms(); ++x) {
    const Vec& xv = ls.family.arm_embed[(size_t)x];
    const double dot = u_star.dot(xv);
    if (dot < -1.0 / (1 + 2 * delta)) continue;  // mode-exiting arm
    ++admissible;
    const double p_ref = (1 - alpha) / (1 + alpha * (1 + 2 * delta) * dot);
    CHECK(p_ref > floor_p);

    // Empirical check: responses stay on the two-point support with the
    // reference probability until the mode switch.
    Vec y_perp = Vec::Unit(D + 2, 0);
    Vec y_delta = Vec::Zero(D + 2);
    y_delta(1) = 1.0;
    y_delta.tail(D) = -(0.5 + delta) * xv;
    auto nat = lower_s_adversary(sp);
    nat->reset(ls, theta, 4000 + x);
    int hits = 0, total = 0;
    for (int t = 0; t < 20000; ++t) {
      Vec y = nat->respond(x);
      const bool is_delta = (y - y_delta).norm() < 1e-12;
      const bool is_perp = (y - y_perp).norm() < 1e-12;
      REQUIRE((is_delta || is_perp));
      ++total;
      if (is_delta) ++hits;
      if (is_perp) break;  // permanent switch to the fallback mean
    }
    const double sigma = std::sqrt(p_ref * (1 - p_ref) / total);
    CHECK(std::abs((double)hits / total - p_ref) <= 4 * sigma + 1e-6);
  }
  CHECK(admissible >= 6);

  // Scaling-with-R policy: reward is exactly -cos(psi) in Bernoulli mode.
  LowerRParams rp;
  rp.lambda = 4.0;
  rp.alpha = 0.45 * kPi;
  rp.theta_star = vec({-std::sin(0.3), std::cos(0.3)});
  {
    // Environment with disc outcomes (y0, y1, 1), reward -y0.
    std::vector<Vec> arms = {vec({-std::sin(0.05), std::cos(0.05)}),
                             vec({-std::sin(-0.1), std::cos(-0.1)})};
    Scenario scr;
    Vec mu = vec({0, 0, 1});
    scr.space = make_outcome_space(mu, ConvexBody::ball(2, 2), 64);
    scr.family.dim_Z = 2;
    scr.family.dim_W = 1;
    for (const Vec& x : arms) {
      Mat M = Mat::Identity(2, 2) + rp.lambda * x * x.transpose();
      Mat T = Mat::Zero(2, 3);
      T.leftCols(2) = M;
      scr.family.F_tensor.push_back({T});
      scr.family.arm_embed.push_back(x);
      scr.reward.c.push_back(vec({-1, 0, 0}));
      scr.reward.c0.push_back(0.0);
    }
    scr.meta.name = "lower_r_env";

    const double psi_lo = std::max(kPi / 4.0, 3.0 * kPi / 4.0 - rp.alpha);
    const double psi = 0.5 * (psi_lo + rp.alpha);
    auto nat = lower_r_adversary(rp);
    nat->reset(scr, rp.theta_star, 77);
    for (int t = 0; t < 2000; ++t) {
      Vec y = nat->respond(t % 2);
      CHECK(scr.reward.eval(t % 2, y) ==
            doctest::Approx(-std::cos(psi)).epsilon(1e-12));
    }

    // Both policies pass the 10^4-sample compatibility audit at 4 sigma.
    auto lowr = lower_r_adversary(rp);
    CHECK(compatibility_audit(*lowr, scr, rp.theta_star, 100, 100, 13).pass);
  }
  {
    // Audit the scaling-with-S policy away from the mode-exiting antipode.
    std::vector<int> keep;
    for (int x = 0; x < ls.family.num_arms(); ++x)
      if (u_star.dot(ls.family.arm_embed[(size_t)x]) >= -1.0 / (1 + 2 * delta))
        keep.push_back(x);
    Scenario sub = ls;
    sub.family.F_tensor.clear();
    sub.family.arm_embed.clear();
    sub.reward.c.clear();
    sub.reward.c0.clear();
    for (int x : keep) {
      sub.family.F_tensor.push_back(ls.family.F_tensor[(size_t)x]);
      sub.family.arm_embed.push_back(ls.family.arm_embed[(size_t)x]);
      sub.reward.c.push_back(ls.reward.c[(size_t)x]);
      sub.reward.c0.push_back(ls.reward.c0[(size_t)x]);
    }
    auto low = lower_s_adversary(sp);
    CHECK(compatibility_audit(*low, sub, theta, 100, 100, 7).pass);
  }
}

// ---------------------------------------------------------------------------
// 8. Baselines.

TEST_CASE("baselines: ucb regret bound and game-ucb value convergence") {
  // Four-arm Bernoulli bandit; greedy nature samples the pinned distribution.
  Scenario b4 = finite_stochastic(std::vector<double>{0.1, 0.35, 0.6, 0.85});
  UCBAgent ucb;
  auto greedy = greedy_adversary();
  MonteCarloSummary mc =
      monte_carlo(ucb, *greedy, b4, b4.family.H_grid[0], 1000, 100, 500);
  const double bound = 8.0 * std::sqrt(4.0 * 1000.0 * std::log(1000.0)) + 3.0 * 4;
  CHECK(mc.mean_regret(999) < bound);

  // Game UCB on a noisy 2x2 game against a stochastic column player: the
  // value of the learned mean-payoff matrix converges to the game value, and
  // the optimistic value stays an upper bound.
  Mat P(2, 2);
  P << 0.6, -0.3, -0.2, 0.4;
  const double true_value = game_value(P).first;
  Scenario g = zerosum_scenario({P}, 4);
  const auto& zm = *g.meta.zerosum;
  std::vector<Vec> means;
  for (int x = 0; x < g.family.num_arms(); ++x) {
    const Vec& e = g.family.arm_embed[(size_t)x];
    Vec m = Vec::Zero(g.space.dim_Y);
    for (size_t v = 0; v < zm.vertex_ab.size(); ++v) {
      const int a = zm.vertex_ab[v][0], b = zm.vertex_ab[v][1];
      const double psig = (1.0 + zm.vertex_payoff[v] * P(a, b)) / 2.0;
      m((int)v) = 0.5 * e(a) * psig;  // uniform over columns
    }
    means.push_back(m);
  }
  for (std::uint64_t sd : {3ull, 10ull, 11ull, 12ull}) {
    GameUCBAgent ag;
    auto nat = fixed_mean_nature(means);
    ag.reset(g, 2000, sd);
    nat->reset(g, g.family.H_grid[0], sd + 100);
    Mat Rm = Mat::Zero(2, 2), Tm = Mat::Zero(2, 2);
    for (int t = 0; t < 2000; ++t) {
      const int arm = ag.select_arm();
      Vec y = nat->respond(arm);
      ag.observe(y);
      for (int j = 0; j < y.size(); ++j) {
        if (y(j) > 0.5) {
          auto ab = zm.vertex_ab[(size_t)j];
          Rm(ab[0], ab[1]) += zm.vertex_payoff[(size_t)j];
          Tm(ab[0], ab[1]) += 1;
        }
      }
    }
    Mat Mean = Mat::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        Mean(a, b) = Tm(a, b) > 0 ? Rm(a, b) / Tm(a, b) : 0.0;
    const double est = game_value(Mean).first;
    CHECK(std::abs(est - true_value) <= 0.05);
    CHECK(game_value(ag.optimistic_matrix()).first >= est - 1e-9);
  }
}

// ---------------------------------------------------------------------------
// 9. CLI determinism.

TEST_CASE("cli: repeated runs with the same config and seed are byte-identical") {
  const char* cli = std::getenv("IB_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "IB_CLI must point at the ibench binary");

  fs::path dir = fs::temp_directory_path() /
                 ("ibacc_" + std::to_string((long)getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({
    "scenario": {"builder": "finite_stochastic",
                 "params": {"means_grid": [[0.3, 0.7]]}},
    "agent": {"kind": "ucb"},
    "nature": {"kind": "greedy"},
    "theta": 0, "N": 30, "reps": 2, "seed": 5, "out": "unused"
  })";

  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(cli) + " run --config '" + cfg.string() +
                            "' --out '" + (dir / out).string() +
                            "' > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  auto slurp = [&](const std::string& out) {
    std::ifstream in(dir / out / "summary.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  REQUIRE(run("a") == 0);
  REQUIRE(run("b") == 0);
  const std::string a = slurp("a"), b = slurp("b");
  CHECK(!a.empty());
  CHECK(a == b);
  fs::remove_all(dir);
}
