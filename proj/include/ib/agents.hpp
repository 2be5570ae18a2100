#pragma once
// Round-based agent policies: the imprecise-UCB algorithm and three
// baselines (classic UCB, Confidence Ball, Game UCB).

#include <cstdint>
#include <memory>
#include <vector>

#include "ib/certificates.hpp"
#include "ib/rng.hpp"
#include "ib/scenario.hpp"

namespace ib {

class AgentPolicy {
 public:
  virtual ~AgentPolicy() = default;
  // The scenario must outlive the policy between reset calls.
  virtual void reset(const Scenario& sc, int horizon, std::uint64_t seed) = 0;
  virtual int select_arm() = 0;
  virtual void observe(const Vec& y) = 0;
};

// Distance in the quotient norm from the hypothesis embedding (theta, 0) to
// the kernel of (z, w) -> F(x, z, ybar) + mu(ybar) w, solved through the
// Chebyshev dual so the LP basis stays small.
double dz_distance(const ZBarSpace& zb, const HypothesisFamily& fam,
                   const Vec& theta, int x, const Vec& ybar);

class IUCBAgent : public AgentPolicy {
 public:
  // eta <= 0: derive the default at reset (simplex recommendation for simplex
  // bodies, R D_W^{5/6} sqrt(ln(C D_W N)) otherwise).
  explicit IUCBAgent(double eta = -1.0);
  ~IUCBAgent() override;

  void reset(const Scenario& sc, int horizon, std::uint64_t seed) override;
  int select_arm() override;
  void observe(const Vec& y) override;

  // Introspection for invariant checks.
  const std::vector<int>& confidence_set() const;
  int cycle_count() const;
  int tau() const;
  double eta() const;
  double last_rho() const;
  bool hypothesis_eliminated() const;
  int optimistic_index() const;
  const ZBarSpace& zbar() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Maximizer of value over the surviving grid subset; lowest-index ties.
// Returns (grid index, optimal arm, value).
std::tuple<int, int, double> optimistic_hypothesis(
    const std::vector<int>& C, const HypothesisFamily& fam,
    const RewardSpec& reward, const OutcomeSpace& space);

class UCBAgent : public AgentPolicy {
 public:
  void reset(const Scenario& sc, int horizon, std::uint64_t seed) override;
  int select_arm() override;
  void observe(const Vec& y) override;

 private:
  const Scenario* sc_ = nullptr;
  int horizon_ = 0;
  int last_arm_ = -1;
  std::vector<double> sum_r_;
  std::vector<int> count_;
};

class ConfidenceBallAgent : public AgentPolicy {
 public:
  void reset(const Scenario& sc, int horizon, std::uint64_t seed) override;
  int select_arm() override;
  void observe(const Vec& y) override;
  const std::vector<int>& spanner() const { return spanner_; }

 private:
  const Scenario* sc_ = nullptr;
  int horizon_ = 0;
  int round_ = 0;
  int last_arm_ = -1;
  std::vector<int> spanner_;
  Mat X_;
  Vec etahat_;
};

// Greedy determinant-maximizing barycentric spanner over a finite arm grid
// given as columns; returns selected column indices.
std::vector<int> barycentric_spanner(const Mat& arms);

class GameUCBAgent : public AgentPolicy {
 public:
  void reset(const Scenario& sc, int horizon, std::uint64_t seed) override;
  int select_arm() override;
  void observe(const Vec& y) override;
  // Current optimistic payoff matrix (for trajectory checks).
  Mat optimistic_matrix() const;

 private:
  const Scenario* sc_ = nullptr;
  int horizon_ = 0;
  int last_a_ = -1;
  Mat R_, T_;
  Rng rng_{0};
};

}  // namespace ib
