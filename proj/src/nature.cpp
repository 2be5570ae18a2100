#include "ib/nature.hpp"

#include <cmath>
#include <optional>

namespace ib {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Label-vertex sample with the given distribution as weights; the mean of
// the sampled vertex equals the distribution itself.
Vec sample_simplex_vertex(const Vec& dist, Rng& rng) {
  double u = rng.uniform();
  double acc = 0;
  int n = (int)dist.size();
  for (int i = 0; i < n; ++i) {
    acc += std::max(0.0, dist(i));
    if (u < acc) return Vec::Unit(n, i);
  }
  return Vec::Unit(n, n - 1);
}

bool simplex_mode(const Scenario& sc) {
  return sc.space.body.kind == ConvexBody::Kind::SimplexOfLabels;
}

void check_arm(const Scenario& sc, int x) {
  if (x < 0 || x >= sc.family.num_arms())
    throw IndexOutOfGrid("nature: arm index outside the grid");
}

class GreedyAdversary final : public NaturePolicy {
 public:
  void reset(const Scenario& sc, const Vec& theta, std::uint64_t seed) override {
    sc_ = &sc;
    theta_ = theta;
    rng_ = Rng(seed);
    cache_.assign((size_t)sc.family.num_arms(), std::nullopt);
  }

  Vec respond(int x) override {
    check_arm(*sc_, x);
    auto& slot = cache_[(size_t)x];
    if (!slot) {
      auto section = credal_section(sc_->family, sc_->space, x, theta_);
      if (!section.feasible())
        throw InfeasibleCredalSet("greedy_adversary: empty credal section");
      slot = section
                 .optimize_point(sc_->reward.c[(size_t)x],
                                 sc_->reward.c0[(size_t)x], /*maximize=*/false)
                 .second;
    }
    if (simplex_mode(*sc_)) return sample_simplex_vertex(*slot, rng_);
    return *slot;
  }

 private:
  const Scenario* sc_ = nullptr;
  Vec theta_;
  Rng rng_{0};
  std::vector<std::optional<Vec>> cache_;
};

class FixedMeanNature final : public NaturePolicy {
 public:
  explicit FixedMeanNature(std::vector<Vec> means) : means_(std::move(means)) {}

  void reset(const Scenario& sc, const Vec& theta, std::uint64_t seed) override {
    sc_ = &sc;
    rng_ = Rng(seed);
    if ((int)means_.size() != sc.family.num_arms())
      throw DimensionMismatch("fixed_mean_nature: one mean per arm required");
    for (int x = 0; x < sc.family.num_arms(); ++x) {
      const Vec& m = means_[(size_t)x];
      if (m.size() != sc.space.dim_Y)
        throw DimensionMismatch("fixed_mean_nature: mean dimension");
      if (!sc.space.body.contains(m, 1e-7))
        throw IncompatibleMean("fixed_mean_nature: mean outside the body");
      Vec resid = f_matrix(sc.family, x, theta) * m;
      if (resid.lpNorm<Eigen::Infinity>() > 1e-7)
        throw IncompatibleMean("fixed_mean_nature: mean outside the credal section");
    }
  }

  Vec respond(int x) override {
    check_arm(*sc_, x);
    const Vec& m = means_[(size_t)x];
    if (simplex_mode(*sc_)) return sample_simplex_vertex(m, rng_);
    return m;
  }

 private:
  std::vector<Vec> means_;
  const Scenario* sc_ = nullptr;
  Rng rng_{0};
};

class LowerSAdversary final : public NaturePolicy {
 public:
  explicit LowerSAdversary(LowerSParams p) : p_(std::move(p)) {
    if (!(p_.alpha > 0 && p_.alpha <= 0.25))
      throw DegenerateInput("lower_s_adversary: alpha must be in (0, 1/4]");
    if (!(p_.delta > 0 && p_.delta < 0.5))
      throw DegenerateInput("lower_s_adversary: delta must be in (0, 1/2)");
    if (p_.u_star.size() == 0 || std::abs(p_.u_star.norm() - 1.0) > 1e-9)
      throw DegenerateInput("lower_s_adversary: u* must be a unit vector");
  }

  void reset(const Scenario& sc, const Vec& theta, std::uint64_t seed) override {
    sc_ = &sc;
    (void)theta;  // theta* is determined by u* in this construction
    rng_ = Rng(seed);
    fallback_ = false;
    const int D = (int)p_.u_star.size();
    if (sc.space.dim_Y != D + 2)
      throw DimensionMismatch("lower_s_adversary: outcome dim must be D+2");
  }

  Vec respond(int x) override {
    check_arm(*sc_, x);
    const Vec& xv = sc_->family.arm_embed[(size_t)x];
    const int D = (int)p_.u_star.size();
    if (xv.size() != D)
      throw DimensionMismatch("lower_s_adversary: arm embedding dim");
    double dot = p_.u_star.dot(xv);
    // The mode predicate covers every arm played so far, current included.
    if (dot < -1.0 / (1.0 + 2.0 * p_.delta)) fallback_ = true;
    Vec y = Vec::Zero(D + 2);
    if (fallback_) {
      double a = p_.alpha * (1.0 + dot);
      y(0) = a;
      y(1) = 1.0 - a;
      y.tail(D) = -0.5 * xv;
      return y;
    }
    double p_delta = (1.0 - p_.alpha) /
                     (1.0 + p_.alpha * (1.0 + 2.0 * p_.delta) * dot);
    if (rng_.bernoulli(p_delta)) {
      y(1) = 1.0;
      y.tail(D) = -(0.5 + p_.delta) * xv;
    } else {
      y(0) = 1.0;      // y_perp: once it occurs, the policy switches modes
      fallback_ = true;
    }
    return y;
  }

 private:
  LowerSParams p_;
  const Scenario* sc_ = nullptr;
  Rng rng_{0};
  bool fallback_ = false;
};

class LowerRAdversary final : public NaturePolicy {
 public:
  explicit LowerRAdversary(LowerRParams p) : p_(std::move(p)) {
    if (!(p_.lambda > 0))
      throw DegenerateInput("lower_r_adversary: lambda must be positive");
    if (!(p_.alpha > 3.0 * kPi / 8.0 && p_.alpha < kPi / 2.0))
      throw DegenerateInput("lower_r_adversary: alpha must be in (3pi/8, pi/2)");
    double psi_lo = std::max(kPi / 4.0, 3.0 * kPi / 4.0 - p_.alpha);
    if (p_.psi <= 0) p_.psi = 0.5 * (psi_lo + p_.alpha);
    if (!(p_.psi > kPi / 4.0 && p_.psi < p_.alpha &&
          p_.alpha + p_.psi > 3.0 * kPi / 4.0))
      throw DegenerateInput(
          "lower_r_adversary: psi must satisfy pi/4 < psi < alpha and "
          "alpha + psi > 3pi/4");
    double thr =
        1.0 / ((p_.lambda + 1.0) * std::tan(p_.alpha + p_.psi - kPi / 2.0));
    if (p_.delta <= 0) p_.delta = std::min(2.0 * thr, 0.5 * (thr + 1.0));
    if (!(p_.delta > thr && p_.delta < 1.0))
      throw DegenerateInput(
          "lower_r_adversary: delta must be in (0,1) and exceed "
          "1/((lambda+1) tan(alpha+psi-pi/2))");
    if (p_.theta_star.size() != 2 ||
        std::abs(p_.theta_star.norm() - 1.0) > 1e-9)
      throw DegenerateInput("lower_r_adversary: theta* must be a unit 2-vector");
  }

  const LowerRParams& params() const { return p_; }

  void reset(const Scenario& sc, const Vec& theta, std::uint64_t seed) override {
    sc_ = &sc;
    (void)theta;  // theta* is a policy parameter in this construction
    rng_ = Rng(seed);
    fallback_ = false;
    if (sc.space.dim_Y != 3)
      throw DimensionMismatch("lower_r_adversary: outcome dim must be 3");
  }

  Vec respond(int x) override {
    check_arm(*sc_, x);
    const Vec& xv = sc_->family.arm_embed[(size_t)x];
    if (xv.size() != 2)
      throw DimensionMismatch("lower_r_adversary: arm embedding dim");
    double dot = xv.dot(p_.theta_star);
    if (std::abs(dot) <= p_.delta) fallback_ = true;
    // theta~(x) = (I + lambda x x^T) theta*, the normal of the admissible
    // mean line at arm x.
    Vec tilde = p_.theta_star + p_.lambda * dot * xv;
    Vec y(3);
    if (fallback_) {
      // Quarter-turn of the unit normal, oriented to the nonnegative reward
      // side (the outcome's 0th coordinate enters the reward with sign -1).
      Vec v(2);
      v << -tilde(1), tilde(0);
      v /= v.norm();
      double s = (v(0) >= 0) ? 1.0 : -1.0;
      y << s * v(0), s * v(1), 1.0;
      return y;
    }
    // tan of the angle between theta~ and the 1st axis, in the convention
    // beta_0(x) = -arctan(x0/x1); tan is pi-periodic so the branch choice
    // does not matter.
    double tan_beta = -tilde(0) / tilde(1);
    double p_plus = 0.5 * (1.0 + tan_beta / std::tan(p_.psi));
    p_plus = std::min(1.0, std::max(0.0, p_plus));
    double sgn = rng_.bernoulli(p_plus) ? 1.0 : -1.0;
    y << std::cos(p_.psi), sgn * std::sin(p_.psi), 1.0;
    return y;
  }

 private:
  LowerRParams p_;
  const Scenario* sc_ = nullptr;
  Rng rng_{0};
  bool fallback_ = false;
};

}  // namespace

std::unique_ptr<NaturePolicy> greedy_adversary() {
  return std::make_unique<GreedyAdversary>();
}

std::unique_ptr<NaturePolicy> fixed_mean_nature(std::vector<Vec> mean_map) {
  return std::make_unique<FixedMeanNature>(std::move(mean_map));
}

std::unique_ptr<NaturePolicy> lower_s_adversary(const LowerSParams& p) {
  return std::make_unique<LowerSAdversary>(p);
}

std::unique_ptr<NaturePolicy> lower_r_adversary(const LowerRParams& p) {
  return std::make_unique<LowerRAdversary>(p);
}

AuditReport compatibility_audit(NaturePolicy& nature, const Scenario& sc,
                                const Vec& theta, int rounds, int reps,
                                std::uint64_t seed) {
  AuditReport report;
  Rng base(seed);
  for (int x = 0; x < sc.family.num_arms(); ++x) {
    Mat F = f_matrix(sc.family, x, theta);
    const int dw = (int)F.rows();
    Vec sum = Vec::Zero(sc.space.dim_Y);
    Vec fsum = Vec::Zero(dw);
    Vec fsq = Vec::Zero(dw);
    long n = 0;
    for (int rep = 0; rep < reps; ++rep) {
      nature.reset(sc, theta,
                   base.stream((std::uint64_t)x * (std::uint64_t)reps +
                               (std::uint64_t)rep)
                       .next_u64());
      for (int t = 0; t < rounds; ++t) {
        Vec y = nature.respond(x);
        sum += y;
        Vec f = F * y;
        fsum += f;
        fsq += f.cwiseProduct(f);
        ++n;
      }
    }
    AuditRow row;
    row.arm = x;
    row.samples = n;
    row.mean = sum / (double)n;
    row.f_residual = F * row.mean;
    Vec var = fsq / (double)n - (fsum / (double)n).cwiseProduct(fsum / (double)n);
    row.tolerance = 4.0 * var.cwiseMax(0.0).cwiseSqrt() / std::sqrt((double)n);
    row.tolerance.array() += 1e-9;
    row.pass = true;
    for (int w = 0; w < dw; ++w)
      if (std::abs(row.f_residual(w)) > row.tolerance(w)) row.pass = false;
    if (!row.pass) report.pass = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ib
