#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdsim/random.hpp"
#include "qdsim/scenario.hpp"

namespace qdsim {

// One executed trial: the aggregation payload plus the binary branch draws
// that, given the scenario, fully determine what happened.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  TrialOutcome outcome;
  std::vector<BranchDraw> branch_trace;
};

TrialRecord run_trial(const ScenarioConfig& config, Seed seed, std::uint64_t trial_index);

struct OutcomeStats {
  std::uint64_t count = 0;
  double frequency = 0.0;
  // 99% normal-approximation interval around the frequency; half-width is
  // floored at 0.5/N so tiny counts never report a zero-width interval, and
  // the bounds are clamped to [0, 1].
  double ci_low = 0.0;
  double ci_high = 1.0;

  bool operator==(const OutcomeStats&) const = default;
};

struct RunStats {
  std::uint64_t n_trials = 0;
  std::map<std::string, OutcomeStats> outcomes;  // counts sum to n_trials
  double success_rate = 0.0;
  double mean_parity_checks = 0.0;
  std::uint64_t anticorrelation_violations = 0;  // stays 0 unless the model breaks
  std::uint64_t state_check_failures = 0;        // trials whose state check failed
  std::map<std::string, std::uint64_t> failures; // failure reason -> count

  bool operator==(const RunStats&) const = default;
};

// Runs n_trials independent executions, each on a stream derived from
// (seed, trial_index), and aggregates. Bit-stable for fixed arguments; the
// aggregation is a commutative merge of per-trial counts, so any evaluation
// order yields the same RunStats.
RunStats run_trials(const ScenarioConfig& config, std::uint64_t n_trials, Seed seed);

// Convenience overload reading trials/seed from the config itself.
RunStats run_trials(const ScenarioConfig& config);

struct BranchPath {
  std::vector<BranchDraw> draws;
  double probability = 0.0;  // product of the draw probabilities
  TrialOutcome outcome;
};

struct ExactResult {
  std::vector<BranchPath> paths;
  std::map<std::string, double> outcome_probability;
  double success_probability = 0.0;
  double total_probability = 0.0;  // sums to 1 within 1e-9
};

// Enumerates every branch path of the scenario with its exact probability.
// Branch points are the draws whose alternative arm has nonzero probability;
// forced draws configured on the scenario are pinned constants describing a
// modified device, so path probabilities still total 1. Throws if any path
// needs more than max_depth draws.
ExactResult exhaustive_branches(const ScenarioConfig& config, int max_depth = 64);

}  // namespace qdsim
