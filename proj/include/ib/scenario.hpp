#pragma once
// The scenario aggregate shared by agents, nature, and the simulator:
// an outcome space, a hypothesis family, a reward, and check metadata.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ib/certificates.hpp"
#include "ib/model.hpp"

namespace ib {

struct KnownValue {
  std::string quantity;
  double value = 0;
  double tolerance = 0;
  std::string note;
};

// Mapping a zero-sum game scenario exposes so matrix-game agents can decode
// rounds: which arm realizes each pure row strategy, and which (row, column,
// payoff) each body vertex encodes.
struct ZeroSumMap {
  int nb1 = 0;
  int nb2 = 0;
  std::vector<int> pure_arm;                 // pure row strategy -> arm index
  std::vector<std::array<int, 2>> vertex_ab; // body vertex -> (row, column)
  std::vector<double> vertex_payoff;         // body vertex -> row payoff
};

struct ScenarioMeta {
  std::string name;
  std::map<std::string, double> grid;  // grid resolutions used by the builder
  std::vector<KnownValue> known_values;
  std::optional<ZeroSumMap> zerosum;
  // Sine estimator the scenario's certificate should use.
  SineMethod sine_method = SineMethod::Auto;
  SineOptions sine_opts;
};

struct Scenario {
  OutcomeSpace space;
  HypothesisFamily family;
  RewardSpec reward;
  ScenarioMeta meta;
};

}  // namespace ib
