#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/protocols.hpp"

namespace qdsim {

enum class Protocol { BellQnd, BellGen, Ghz3, GhzN, Table1 };
std::string_view to_string(Protocol protocol);

enum class ForcedBranch { Random, On, Off };
std::string_view to_string(ForcedBranch mode);

enum class ForcedParity { Random, Parallel, Antiparallel };
std::string_view to_string(ForcedParity mode);

enum class OutputFormat { Text, Csv };
std::string_view to_string(OutputFormat format);

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment description. Serialized as flat key=value lines with '#'
// comments; see parse_scenario/render_scenario.
struct ScenarioConfig {
  Protocol protocol = Protocol::BellQnd;
  std::optional<BellLabel> input_label;               // bell_qnd / bell_gen
  std::optional<BellCoefficients> input_coefficients; // explicit Bell-basis input
  int n = 0;                                          // ghz_n
  GrowthStrategy strategy = GrowthStrategy::Sequential;
  int max_rounds = 1;
  std::uint64_t trials = 10000;  // 0 selects exact branch enumeration
  std::uint64_t seed = 1;
  ForcedBranch force_swap = ForcedBranch::Random;
  ForcedParity force_parity = ForcedParity::Random;
  OutputFormat format = OutputFormat::Text;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parses scenario text. Keys: protocol (required), input, amplitudes (4 reals
// or 8 re,im pairs in the Bell basis; normalized on load, warning beyond
// 1e-6), n, strategy, m, trials, seed, force_swap, force_parity, format.
// Throws ScenarioParseError naming the offending key and line.
ScenarioConfig parse_scenario(std::string_view text,
                              std::vector<std::string>* warnings = nullptr);

// Canonical serialization; parse_scenario(render_scenario(c)) == c.
std::string render_scenario(const ScenarioConfig& config);

// Initial two-spin state for the bell protocols.
PureState scenario_input_state(const ScenarioConfig& config);

// Payload of a single protocol execution, aggregation-ready.
struct TrialOutcome {
  std::string outcome;  // aggregation key: a Bell label or success/failure
  bool success = true;
  int parity_checks = 0;
  int anticorrelation_violations = 0;
  bool state_verified = true;  // restored / canonical / GHZ-class check
  std::string failure_reason;  // empty on success
};

// Executes the configured protocol once, drawing all randomness (minus the
// configured force overrides) from `source`.
TrialOutcome run_scenario_once(const ScenarioConfig& config, OutcomeSource& source);

std::string format_double(double value);  // shortest round-trip form

}  // namespace qdsim
