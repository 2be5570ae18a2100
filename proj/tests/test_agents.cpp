#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ib/agents.hpp"
#include "ib/rng.hpp"

using namespace ib;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out((int)v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Point-credal two-label scenario (see test_model / test_certificates).
Scenario finite_scenario(const std::vector<std::vector<double>>& mean_rows,
                         const std::string& name) {
  Scenario sc;
  sc.meta.name = name;
  sc.space = make_outcome_space(vec({1, 1}), ConvexBody::simplex(2));
  const int A = (int)mean_rows[0].size();
  sc.family.dim_Z = A + 1;
  sc.family.dim_W = 1;
  for (const auto& means : mean_rows) {
    Vec theta = Vec::Zero(A + 1);
    for (int x = 0; x < A; ++x) theta(x) = -means[(size_t)x];
    theta(A) = 1.0;
    sc.family.H_grid.push_back(theta);
  }
  for (int x = 0; x < A; ++x) {
    Mat T = Mat::Zero(A + 1, 2);
    T(A, 1) = 1.0;
    T(x, 0) = 1.0;
    T(x, 1) = 1.0;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(Vec::Zero(0));
    sc.reward.c.push_back(vec({0, 1}));
    sc.reward.c0.push_back(0.0);
  }
  return sc;
}

// Segment-body linear scenario used for dz checks.
Scenario segment_scenario(const std::vector<double>& arms,
                          const std::vector<double>& thetas) {
  Scenario sc;
  sc.meta.name = "segment";
  sc.space = make_outcome_space(vec({1, 0}),
                                ConvexBody::segment(vec({1, -1}), vec({1, 1})));
  sc.family.dim_Z = 2;
  sc.family.dim_W = 1;
  for (double x : arms) {
    Mat T = Mat::Zero(2, 2);
    T(0, 0) = x;
    T(1, 1) = -1.0;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(vec({x}));
  }
  for (double t : thetas) sc.family.H_grid.push_back(vec({t, 1}));
  return sc;
}

}  // namespace

TEST_CASE("dz_distance: zero on the kernel, bounded by the constraint norm") {
  Scenario sc = segment_scenario({1.0, 0.4}, {0.0, 0.3, 0.8});
  ZBarSpace zb = build_zbar(sc.family, sc.space);
  WDual wd = build_w_dual(sc.family, sc.space);
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    double th = rng.uniform(-1, 1);
    Vec theta = vec({th, 1});
    int x = rng.below(2);
    double ax = sc.family.arm_embed[(size_t)x](0);
    // ybar consistent with theta: y1 = (ax * th) * y0.
    Vec yin = vec({1.0, ax * th});
    CHECK(dz_distance(zb, sc.family, theta, x, yin) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // Arbitrary ybar: dz <= || F(x, theta, ybar) ||_W.
    Vec yb = vec({1.0, rng.uniform(-1, 1)});
    double dz = dz_distance(zb, sc.family, theta, x, yb);
    CHECK(dz >= -1e-12);
    CHECK(dz <= wd(f_apply(sc.family, x, theta, yb)) + 1e-9);
  }
}

TEST_CASE("dz_distance matches a grid oracle over the kernel") {
  Scenario sc = segment_scenario({1.0}, {0.0, 0.5});
  ZBarSpace zb = build_zbar(sc.family, sc.space);
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    Vec theta = vec({rng.uniform(-1, 1), 1});
    Vec yb = vec({1.0, rng.uniform(-1, 1)});
    double dz = dz_distance(zb, sc.family, theta, 0, yb);
    // Oracle: brute minimum of the covector max over the kernel.
    Mat M = Mat::Zero(1, 3);
    M(0, 0) = (sc.family.F_tensor[0][0] * yb)(0);
    M(0, 1) = (sc.family.F_tensor[0][0] * yb)(1);
    M(0, 2) = sc.space.mu.dot(yb);
    Mat K = kernel_basis(M);
    REQUIRE(K.cols() == 2);
    Vec te = vec({theta(0), theta(1), 0.0});
    double ref = std::numeric_limits<double>::infinity();
    for (double c0 = -5; c0 <= 5; c0 += 0.01) {
      for (double c1 = -5; c1 <= 5; c1 += 0.01) {
        Vec v = te - K.col(0) * c0 - K.col(1) * c1;
        ref = std::min(ref, (zb.L.transpose() * v).cwiseAbs().maxCoeff());
      }
    }
    CHECK(dz <= ref + 1e-9);
    CHECK(dz >= ref - 1e-2);  // grid resolution slack
  }
}

TEST_CASE("optimistic_hypothesis") {
  Scenario sc = finite_scenario({{0.2, 0.8}, {0.6, 0.1}, {0.3, 0.5}}, "opt");
  std::vector<int> all = {0, 1, 2};
  auto [h, arm, value] = optimistic_hypothesis(all, sc.family, sc.reward, sc.space);
  CHECK(h == 0);
  CHECK(arm == 1);
  CHECK(value == doctest::Approx(0.8).epsilon(1e-9));
  std::vector<int> sub = {1, 2};
  auto [h2, arm2, value2] = optimistic_hypothesis(sub, sc.family, sc.reward, sc.space);
  CHECK(h2 == 1);
  CHECK(arm2 == 0);
  CHECK(value2 == doctest::Approx(0.6).epsilon(1e-9));
  std::vector<int> one = {2};
  CHECK(std::get<0>(optimistic_hypothesis(one, sc.family, sc.reward, sc.space)) == 2);
  CHECK_THROWS_AS(optimistic_hypothesis({}, sc.family, sc.reward, sc.space),
                  EmptyConfidenceSet);
}

TEST_CASE("IUCB: hand trace eliminates the inconsistent hypothesis") {
  Scenario sc = finite_scenario({{0.2, 0.8}, {0.8, 0.2}}, "pair");
  IUCBAgent agent(0.05);
  agent.reset(sc, 100, 1);
  CHECK(agent.confidence_set().size() == 2);
  CHECK(agent.optimistic_index() == 0);  // tie at 0.8 -> lowest index
  int arm = agent.select_arm();
  CHECK(arm == 1);  // hypothesis 0 prefers arm 1
  // Nature consistent with hypothesis 0: mean (0.2, 0.8) at arm 1.
  int prev_size = 2;
  bool ended = false;
  for (int n = 0; n < 50 && !ended; ++n) {
    CHECK(agent.select_arm() == arm);  // constant within the cycle
    agent.observe(vec({0.2, 0.8}));
    ended = agent.cycle_count() > 0;
    CHECK((int)agent.confidence_set().size() <= prev_size);
    prev_size = (int)agent.confidence_set().size();
  }
  REQUIRE(ended);
  CHECK(agent.confidence_set() == std::vector<int>{0});
  CHECK(!agent.hypothesis_eliminated());
  CHECK(agent.select_arm() == 1);
}

TEST_CASE("IUCB: huge eta never ends a cycle; tiny eta ends at tau = 1") {
  Scenario sc = finite_scenario({{0.2, 0.8}, {0.8, 0.2}}, "pair2");
  IUCBAgent calm(1e6);
  calm.reset(sc, 100, 1);
  for (int n = 0; n < 100; ++n) {
    calm.select_arm();
    calm.observe(vec({0.2, 0.8}));
  }
  CHECK(calm.cycle_count() == 0);
  CHECK(calm.confidence_set().size() == 2);

  IUCBAgent eager(1e-6);
  eager.reset(sc, 100, 2);
  eager.select_arm();
  eager.observe(vec({0.2, 0.8}));
  CHECK(eager.cycle_count() == 1);
  CHECK(eager.tau() == 0);
  CHECK(eager.confidence_set() == std::vector<int>{0});
}

TEST_CASE("IUCB: inconsistent outcomes empty the confidence set, fallback arm") {
  Scenario sc = finite_scenario({{0.2, 0.8}, {0.8, 0.2}}, "void");
  IUCBAgent agent(1e-6);
  agent.reset(sc, 100, 3);
  int arm = agent.select_arm();
  // Outcome mean 0 at the played arm contradicts both hypotheses.
  agent.observe(vec({1.0, 0.0}));
  CHECK(agent.hypothesis_eliminated());
  CHECK(agent.confidence_set().empty());
  CHECK(agent.select_arm() == arm);  // permanent fallback
  agent.observe(vec({1.0, 0.0}));
  CHECK(agent.select_arm() == arm);
}

TEST_CASE("IUCB rejects outcomes off the body") {
  Scenario sc = finite_scenario({{0.5, 0.5}}, "guard");
  IUCBAgent agent(1.0);
  agent.reset(sc, 10, 1);
  agent.select_arm();
  CHECK_THROWS_AS(agent.observe(vec({0.7, 0.7})), OutcomeOutsideBody);
}

TEST_CASE("UCB mechanics") {
  Scenario sc = finite_scenario({{0.5, 0.4}}, "ucb");
  UCBAgent agent;
  agent.reset(sc, 1000, 1);
  // Unexplored arms first, in index order.
  CHECK(agent.select_arm() == 0);
  agent.observe(vec({0.5, 0.5}));  // reward 0.5
  CHECK(agent.select_arm() == 1);
  agent.observe(vec({0.6, 0.4}));  // reward 0.4
  // Equal pulls: the bonus cancels, the higher mean wins.
  CHECK(agent.select_arm() == 0);

  // Bernoulli concentration: the best arm dominates pull counts.
  Rng rng(99);
  UCBAgent mc;
  mc.reset(sc, 2000, 1);
  std::vector<double> means = {0.7, 0.3};
  int best_pulls = 0;
  for (int n = 0; n < 2000; ++n) {
    int x = mc.select_arm();
    bool hit = rng.bernoulli(means[(size_t)x]);
    mc.observe(hit ? vec({0, 1}) : vec({1, 0}));
    if (x == 0) ++best_pulls;
  }
  CHECK(best_pulls > 1200);
}

TEST_CASE("barycentric_spanner: basis case and local optimality") {
  Mat basis = Mat::Identity(2, 2);
  auto sel = barycentric_spanner(basis);
  CHECK(sel == std::vector<int>({0, 1}));

  Rng rng(17);
  Mat arms(2, 12);
  for (int j = 0; j < arms.cols(); ++j)
    arms.col(j) = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  auto s = barycentric_spanner(arms);
  Mat B(2, 2);
  B.col(0) = arms.col(s[0]);
  B.col(1) = arms.col(s[1]);
  double det = std::abs(B.determinant());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < arms.cols(); ++j) {
      Mat cand = B;
      cand.col(i) = arms.col(j);
      CHECK(std::abs(cand.determinant()) <= det + 1e-9);
    }
  }
  CHECK_THROWS_AS(barycentric_spanner(Mat(Mat::Zero(2, 3))), DegenerateInput);
}

TEST_CASE("Confidence Ball: index computation on a 2-arm basis instance") {
  Scenario sc;
  sc.meta.name = "cb";
  sc.space = make_outcome_space(vec({1, 0}),
                                ConvexBody::segment(vec({1, -1}), vec({1, 1})));
  sc.family.dim_Z = 2;
  sc.family.dim_W = 1;
  for (int i = 0; i < 2; ++i) {
    Mat T = Mat::Zero(2, 2);
    T(i, 0) = 1.0;
    T(1, 1) = -1.0;
    sc.family.F_tensor.push_back({T});
    sc.family.arm_embed.push_back(i == 0 ? vec({1, 0}) : vec({0, 1}));
    sc.reward.c.push_back(vec({0, 1}));
    sc.reward.c0.push_back(0.0);
  }
  sc.family.H_grid.push_back(vec({0, 0}));
  ConfidenceBallAgent agent;
  agent.reset(sc, 100, 1);
  CHECK(agent.spanner() == std::vector<int>({0, 1}));
  // Round 1: X = I, etahat = 0; both indices sqrt(beta) -> arm 0.
  CHECK(agent.select_arm() == 0);
  agent.observe(vec({1, 1}));  // reward 1 along e0
  // Round 2: X = diag(2,1), etahat = e0, theta_hat = (1/2, 0).
  double n = 2, N = 100;
  double lnn2 = std::log(N * n * n);
  double beta = std::max(128.0 * 2 * std::log(n) * lnn2,
                         std::pow(8.0 / 3.0 * lnn2, 2));
  double idx0 = 0.5 + std::sqrt(beta * 0.5);
  double idx1 = 0.0 + std::sqrt(beta * 1.0);
  int expect = idx0 >= idx1 ? 0 : 1;
  CHECK(agent.select_arm() == expect);
}

TEST_CASE("Game UCB mechanics") {
  Scenario sc;
  sc.meta.name = "gucb";
  // Body: 8 vertices labelled (a, b, sign); payoff = sign.
  sc.space = make_outcome_space(Vec::Ones(8), ConvexBody::simplex(8));
  sc.family.dim_Z = 1;
  sc.family.dim_W = 1;
  Mat T = Mat::Zero(1, 8);
  sc.family.F_tensor.push_back({T});
  sc.family.F_tensor.push_back({T});
  sc.family.arm_embed = {Vec::Zero(0), Vec::Zero(0)};
  sc.family.H_grid.push_back(vec({1.0}));
  ZeroSumMap zs;
  zs.nb1 = 2;
  zs.nb2 = 2;
  zs.pure_arm = {0, 1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int s = 0; s < 2; ++s) {
        zs.vertex_ab.push_back({a, b});
        zs.vertex_payoff.push_back(s == 0 ? 1.0 : -1.0);
      }
  sc.meta.zerosum = zs;
  GameUCBAgent agent;
  agent.reset(sc, 1000, 5);
  // All unvisited: constant bonus-only matrix.
  Mat P = agent.optimistic_matrix();
  double bonus = std::sqrt(2.0 * std::log(2.0 * 2 * 2 * 1000.0 * 1000.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(P(a, b) == doctest::Approx(bonus));
  int arm = agent.select_arm();
  CHECK((arm == 0 || arm == 1));
  // Feed vertex (a = arm, b = 0, +1): the cell updates to mean + bonus.
  Vec y = Vec::Zero(8);
  int vtx = arm * 4 + 0 * 2 + 0;
  y(vtx) = 1.0;
  agent.observe(y);
  Mat P2 = agent.optimistic_matrix();
  CHECK(P2(arm, 0) == doctest::Approx(1.0 + bonus));
  CHECK(P2(1 - arm, 1) == doctest::Approx(bonus));
}
