#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ib/certificates.hpp"
#include "ib/rng.hpp"

using namespace ib;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out((int)v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Torus-style linear bandit over the segment body {(1,t) : t in [-1,1]} with
// homogenized hypotheses (theta, 1): F(x,z,y) = (x z_0) y_0 - z_1 y_1.
struct Mini {
  OutcomeSpace space;
  HypothesisFamily fam;
};

Mini mini_linear(const std::vector<double>& arms, const std::vector<double>& thetas) {
  Mini m;
  m.space = make_outcome_space(vec({1, 0}),
                               ConvexBody::segment(vec({1, -1}), vec({1, 1})));
  m.fam.dim_Z = 2;
  m.fam.dim_W = 1;
  for (double x : arms) {
    Mat T = Mat::Zero(2, 2);
    T(0, 0) = x;
    T(1, 1) = -1.0;
    m.fam.F_tensor.push_back({T});
    m.fam.arm_embed.push_back(vec({x}));
  }
  for (double t : thetas) m.fam.H_grid.push_back(vec({t, 1}));
  return m;
}

// Two-arm point-credal family on the label pair simplex (see test_model).
struct Finite {
  OutcomeSpace space;
  HypothesisFamily fam;
  RewardSpec reward;
};

Finite finite_family(const std::vector<std::vector<double>>& mean_rows) {
  Finite out;
  out.space = make_outcome_space(vec({1, 1}), ConvexBody::simplex(2));
  const int A = (int)mean_rows[0].size();
  out.fam.dim_Z = A + 1;
  out.fam.dim_W = 1;
  for (const auto& means : mean_rows) {
    Vec theta = Vec::Zero(A + 1);
    for (int x = 0; x < A; ++x) theta(x) = -means[(size_t)x];
    theta(A) = 1.0;
    out.fam.H_grid.push_back(theta);
  }
  for (int x = 0; x < A; ++x) {
    Mat T = Mat::Zero(A + 1, 2);
    T(A, 1) = 1.0;
    T(x, 0) = 1.0;
    T(x, 1) = 1.0;
    out.fam.F_tensor.push_back({T});
    out.fam.arm_embed.push_back(Vec::Zero(0));
    out.reward.c.push_back(vec({0, 1}));
    out.reward.c0.push_back(0.0);
  }
  return out;
}

}  // namespace

TEST_CASE("w_norm against the preimage oracle") {
  Mini m = mini_linear({1.0, 0.3}, {0.0, 0.5, 1.0});
  CHECK(w_norm(m.fam, m.space, vec({1})) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(w_norm(m.fam, m.space, vec({0})) == doctest::Approx(0.0));
  // Oracle: max over grid pairs of min-norm preimage through an LP.
  Rng rng(11);
  WDual wd = build_w_dual(m.fam, m.space);
  for (int t = 0; t < 10; ++t) {
    Vec w = vec({rng.uniform(-2, 2)});
    double ref = 0;
    for (int x = 0; x < m.fam.num_arms(); ++x) {
      for (int h = 0; h < m.fam.num_hypotheses(); ++h) {
        AffineSubspace pre(f_matrix(m.fam, x, h), w);
        ref = std::max(ref, min_norm_on_affine(m.space.y_norm, pre).second);
      }
    }
    CHECK(wd(w) == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("build_zbar: trivial and nontrivial null subspaces") {
  // Two distinct arms leave no common null direction.
  Mini m = mini_linear({1.0, 0.3}, {0.0, 1.0});
  ZBarSpace zb = build_zbar(m.fam, m.space);
  CHECK(zb.N_basis.cols() == 0);
  CHECK(zb.complement.cols() == 3);

  // A single arm does: (z0, z1, w) = (1, 0, -x) kills F + mu w identically.
  Mini one = mini_linear({1.0}, {0.0, 1.0});
  ZBarSpace zb1 = build_zbar(one.fam, one.space);
  REQUIRE(zb1.N_basis.cols() == 1);
  Vec n1 = zb1.N_basis.col(0);
  CHECK(std::abs(n1(1)) < 1e-9);
  CHECK(std::abs(n1(2) / n1(0) + 1.0) < 1e-9);
  CHECK((zb1.L.transpose() * zb1.N_basis).cwiseAbs().maxCoeff() < 1e-9);

  // F(x,z,y) = alpha * z * mu(y) makes (z, -alpha z) null directions.
  const double alpha = 0.4;
  OutcomeSpace space = make_outcome_space(vec({1, 1}), ConvexBody::simplex(2));
  HypothesisFamily fam;
  fam.dim_Z = 1;
  fam.dim_W = 1;
  Mat T(1, 2);
  T << alpha, alpha;
  fam.F_tensor.push_back({T});
  fam.arm_embed.push_back(Vec::Zero(0));
  fam.H_grid.push_back(vec({1.0}));
  ZBarSpace zb2 = build_zbar(fam, space);
  REQUIRE(zb2.N_basis.cols() == 1);
  Vec n = zb2.N_basis.col(0);
  CHECK(std::abs(n(1) / n(0) + alpha) < 1e-9);
  // Covectors annihilate the null subspace.
  if (zb2.L.cols() > 0)
    CHECK((zb2.L.transpose() * zb2.N_basis).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zbar_norm values and W-embedding isometry") {
  Mini m = mini_linear({1.0}, {0.0, 1.0});
  ZBarSpace zb = build_zbar(m.fam, m.space);
  CHECK(zbar_norm(zb, Vec(Vec::Zero(3))) == doctest::Approx(0.0));
  // |x . theta| = 1 gives norm 2: worst outcome (1, -1).
  CHECK(zbar_norm_theta(zb, vec({1, 1})) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(zbar_norm_theta(zb, vec({0, 1})) == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(5);
  WDual wd = build_w_dual(m.fam, m.space);
  for (int t = 0; t < 20; ++t) {
    Vec w = vec({rng.uniform(-3, 3)});
    Vec v = Vec::Zero(3);
    v(2) = w(0);
    CHECK(zbar_norm(zb, v) == doctest::Approx(wd(w)).epsilon(1e-6));
  }

  // The max dominates any single (arm, extreme point) evaluation.
  for (int t = 0; t < 10; ++t) {
    Vec v = vec({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    double nv = zbar_norm(zb, v);
    for (int e = 0; e < m.space.ext.cols(); ++e) {
      Vec ye = m.space.ext.col(e);
      Vec fbar = f_apply(m.fam, 0, v.head(2), ye) + m.space.mu.dot(ye) * v.tail(1);
      CHECK(nv >= wd(fbar) - 1e-9);
    }
  }
}

TEST_CASE("param_R: torus-style value 2 and point-family cap") {
  Mini m = mini_linear({1.0, -1.0}, {0.0, 0.5, 1.0});
  CHECK(param_R(m.fam, m.space) == doctest::Approx(2.0).epsilon(1e-9));

  Finite f = finite_family({{0.5, 0.25}, {0.9, 0.1}});
  CHECK(param_R(f.fam, f.space) <= 2.0 + 1e-6);

  // Per-hypothesis rescaling changes R but not arms/previsions/gap.
  Finite g1 = finite_family({{0.2, 0.8}, {0.8, 0.2}});
  Finite g2 = finite_family({{0.2, 0.8}, {0.8, 0.2}});
  g2.fam.H_grid[0] *= 5.0;
  CHECK(param_R(g2.fam, g2.space) != doctest::Approx(param_R(g1.fam, g1.space)));
  for (int h = 0; h < 2; ++h) {
    auto a = optimal_arm(g1.fam, g1.reward, g1.space, g1.fam.H_grid[(size_t)h]);
    auto b = optimal_arm(g2.fam, g2.reward, g2.space, g2.fam.H_grid[(size_t)h]);
    CHECK(a.first == b.first);
    CHECK(a.second == doctest::Approx(b.second).epsilon(1e-9));
  }
  CHECK(gap_compute(g1.fam, g1.reward, g1.space) ==
        doctest::Approx(gap_compute(g2.fam, g2.reward, g2.space)).epsilon(1e-7));
}

TEST_CASE("param_S on simplex families: closed value and bruteforce agreement") {
  Finite f = finite_family({{0.5, 0.3}});
  auto [s, note] = param_S(f.fam, f.space);
  // Point sections (1-m, m): the max-min coordinate is min(m, 1-m).
  CHECK(s == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(note.find("simplex-lb") == 0);

  // One-dimensional sections in the triangle: compare with the sampler.
  OutcomeSpace tri = make_outcome_space(vec({1, 1, 1}), ConvexBody::simplex(3));
  HypothesisFamily fam;
  fam.dim_Z = 3;
  fam.dim_W = 1;
  Mat T = Mat::Identity(3, 3);
  fam.F_tensor.push_back({T});
  fam.arm_embed.push_back(Vec::Zero(0));
  fam.H_grid.push_back(vec({1, -1, 0}));
  auto [lb, n1] = param_S(fam, tri);
  CHECK(lb == doctest::Approx(1.0 / 3).epsilon(1e-7));
  SineOptions opts;
  opts.samples = 8000;
  auto [bf, n2] = param_S(fam, tri, SineMethod::Bruteforce, opts);
  CHECK(lb <= bf + 1e-2);
}

TEST_CASE("param_S ball closed form: line through the center") {
  OutcomeSpace space = make_outcome_space(vec({0, 0, 1}), ConvexBody::ball(2, 2));
  HypothesisFamily fam;
  fam.dim_Z = 2;
  fam.dim_W = 1;
  Mat T = Mat::Zero(2, 3);
  T(0, 0) = 1.0;
  T(1, 1) = 1.0;  // F(x,z,y) = z0 y0 + z1 y1
  fam.F_tensor.push_back({T});
  fam.arm_embed.push_back(Vec::Zero(0));
  fam.H_grid.push_back(vec({0.6, 0.8}));
  auto [s, note] = param_S(fam, space);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(note.find("ball") == 0);
}

TEST_CASE("param_S cone estimate tracks the closed form") {
  const int D = 4;
  const double alpha = 0.1;
  OutcomeSpace space =
      make_outcome_space(vec({1, 1, 0, 0, 0, 0}), ConvexBody::cone_ball(D, alpha));
  HypothesisFamily fam;
  fam.dim_Z = D + 2;
  fam.dim_W = 1;
  std::vector<Mat> T;
  T.push_back(Mat::Identity(D + 2, D + 2));  // F(x,z,y) = z . y
  fam.F_tensor.push_back(T);
  fam.arm_embed.push_back(Vec::Zero(0));
  Vec theta = Vec::Zero(D + 2);
  theta(0) = 1 - alpha;
  theta(1) = -alpha;
  theta(2) = 2 * alpha;
  fam.H_grid.push_back(theta);
  SineOptions opts;
  opts.samples = 20000;
  auto [s, note] = param_S(fam, space, SineMethod::Auto, opts);
  double closed = 2 * alpha / std::sqrt(1 + 4 * alpha * alpha);
  CHECK(s / closed >= 0.7);
  CHECK(s / closed <= 1.3);
  CHECK(note.find("cone-flat") == 0);
}

TEST_CASE("param_S chain combination") {
  Finite f = finite_family({{0.5, 0.3}});
  SineOptions opts;
  opts.chain_components = {0.5, 0.7};
  auto [s, note] = param_S(f.fam, f.space, SineMethod::Chain, opts);
  CHECK(s == doctest::Approx(0.5));
  CHECK(note == "chain");
  CHECK_THROWS_AS(param_S(f.fam, f.space, SineMethod::Chain), NoApplicableMethod);
}

TEST_CASE("param_C") {
  OutcomeSpace space = make_outcome_space(vec({1, 1}), ConvexBody::simplex(2));
  RewardSpec reward;
  reward.c = {vec({0, 1}), vec({0.5, 0.5})};
  reward.c0 = {0.0, 0.0};
  CHECK(param_C(reward, space) == doctest::Approx(1.0));
  RewardSpec constant;
  constant.c = {vec({0.3, 0.3})};
  constant.c0 = {1.0};
  CHECK(param_C(constant, space) == doctest::Approx(0.0));
  // 1-Lipschitz rewards on a label simplex stay within range 2.
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    RewardSpec lip;
    lip.c = {Vec(Vec::NullaryExpr(2, [&](int) { return rng.uniform(-1, 1); }))};
    lip.c0 = {rng.uniform(-1, 1)};
    CHECK(param_C(lip, space) <= 2.0 + 1e-12);
  }
}

TEST_CASE("gap_compute: singleton, two-hypothesis hand value") {
  Finite single = finite_family({{0.5, 0.25}});
  CHECK(std::isinf(gap_compute(single.fam, single.reward, single.space)));

  Finite pair = finite_family({{0.2, 0.8}, {0.8, 0.2}});
  // Qualifying pairs compare the point sections (0.8,0.2) and (0.2,0.8):
  // l1 distance 1.2.
  CHECK(gap_compute(pair.fam, pair.reward, pair.space) ==
        doctest::Approx(1.2).epsilon(1e-7));
}

TEST_CASE("bound evaluators match an independent transcription") {
  Certificates cert;
  cert.R = 2.0;
  cert.S = 0.5;
  cert.C = 1.5;
  BoundDims dims{3, 2};
  const double N = 1000, eta = 4.0, delta = 0.05;
  const double gamma = 1.0 / std::log(1.0 / (1.0 - 1.0 / (M_E * M_E)));
  CHECK(bound_gamma() == doctest::Approx(gamma).epsilon(1e-12));

  {
    double Si = 1 / cert.S;
    double lg = std::log(dims.D_Z * cert.R / delta);
    double ref = 8 * eta * (Si + 1) * dims.D_Z * (dims.D_Z + 1) * std::sqrt(gamma * lg * N) +
                 cert.C * dims.D_W * N * N * (N + 1) *
                     std::exp(-eta * eta / (cert.R * cert.R * std::pow((double)dims.D_W, 5.0 / 3.0))) +
                 gamma * cert.C * dims.D_Z * dims.D_Z * lg +
                 (Si + 1) * dims.D_Z * (36 * dims.D_Z + 8) * N * delta;
    CHECK(bound_main(cert, dims, N, eta, delta) == doctest::Approx(ref).epsilon(1e-12));
  }
  {
    int labels = 6;
    double Si = 1 / cert.S;
    double lg = std::log(dims.D_Z * cert.R / delta);
    double ref = 8 * eta * (Si + 1) * dims.D_Z * (dims.D_Z + 1) * std::sqrt(gamma * lg * N) +
                 0.5 * cert.C * std::pow(2 * M_E * labels / (dims.D_W + 1.0), dims.D_W + 1) *
                     N * N * (N + 1) * std::exp(-eta * eta / (2 * cert.R * cert.R)) +
                 gamma * cert.C * dims.D_Z * dims.D_Z * lg +
                 (Si + 1) * dims.D_Z * (36 * dims.D_Z + 8) * N * delta;
    CHECK(bound_simplex(cert, dims, N, eta, delta, labels) ==
          doctest::Approx(ref).epsilon(1e-12));
    double eta_ref = cert.R * std::sqrt(2 * (dims.D_W + 1) *
                                        std::log(cert.C * N * N * N * labels / (dims.D_W + 1.0)));
    CHECK(simplex_recommended_eta(cert, N, labels, dims.D_W) ==
          doctest::Approx(eta_ref).epsilon(1e-12));
  }
  {
    double g = 0.4, Si = 1 / cert.S;
    double ref = gamma * dims.D_Z * dims.D_Z *
                     (256 * Si * (Si + 1) * (dims.D_Z + 1) * (dims.D_Z + 1) * eta * eta / g + cert.C) *
                     std::log(144 * Si * std::pow((double)dims.D_Z, 3) * cert.R / g) +
                 cert.C * dims.D_W * N * N * (N + 1) *
                     std::exp(-eta * eta / (cert.R * cert.R * std::pow((double)dims.D_W, 5.0 / 3.0)));
    CHECK(bound_gap(cert, dims, N, eta, g) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("bound evaluators: limiting behavior") {
  Certificates cert;
  cert.R = 2.0;
  cert.S = 0.5;
  cert.C = 1.0;
  BoundDims dims{2, 1};
  CHECK(std::isinf(bound_main(cert, dims, 100, 1.0, 0.0)));
  // eta = 0: the exponential term contributes its full N^2(N+1) scale.
  double full = cert.C * dims.D_W * 100.0 * 100.0 * 101.0;
  CHECK(bound_main(cert, dims, 100, 0.0, 0.1) >= full);
  // Simplex bound is monotone in N for fixed eta, delta.
  double prev = 0;
  for (double N : {10.0, 100.0, 1000.0}) {
    double b = bound_simplex(cert, dims, N, 3.0, 0.1, 4);
    CHECK(b >= prev);
    prev = b;
  }
  CHECK_THROWS_AS(bound_gap(cert, dims, 10, 1.0, 0.0), ZeroGap);
  // Enormous gap: only the exponential term remains.
  double t2 = cert.C * dims.D_W * 100.0 * 100.0 * 101.0 *
              std::exp(-9.0 / (cert.R * cert.R * 1.0));
  CHECK(bound_gap(cert, dims, 100, 3.0, 1e12) == doctest::Approx(t2).epsilon(1e-9));
  // Doubling N only moves the exponential tail.
  double delta_term = bound_gap(cert, dims, 200, 3.0, 0.5) - bound_gap(cert, dims, 100, 3.0, 0.5);
  double tail = cert.C * dims.D_W * 200.0 * 200.0 * 201.0 *
                std::exp(-9.0 / (cert.R * cert.R));
  CHECK(delta_term <= tail + 1e-9);
}
