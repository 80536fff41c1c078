#include "qdsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace qdsim {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile
constexpr std::size_t kMaxPaths = std::size_t{1} << 20;

void require_runnable(const ScenarioConfig& config) {
  if (config.protocol == Protocol::Table1) {
    throw std::invalid_argument("table1 is a rendering mode, not a runnable scenario");
  }
}

OutcomeStats make_stats(std::uint64_t count, std::uint64_t n) {
  const double freq = static_cast<double>(count) / static_cast<double>(n);
  double half = kZ99 * std::sqrt(freq * (1.0 - freq) / static_cast<double>(n));
  half = std::max(half, 0.5 / static_cast<double>(n));
  return {count, freq, std::max(freq - half, 0.0), std::min(freq + half, 1.0)};
}

// Replays a frozen decision prefix, then walks the default arm: the branch
// with nonzero probability, preferring "true" when both are live. Records
// where a live alternative exists so the caller can schedule the flips.
class EnumerationSource final : public OutcomeSource {
 public:
  EnumerationSource(const std::vector<bool>& prefix, int max_depth)
      : prefix_(prefix), max_depth_(max_depth) {}

  bool draw(BranchKind kind, double p_true) override {
    const std::size_t index = trace_.size();
    if (index >= static_cast<std::size_t>(max_depth_)) {
      throw std::runtime_error("branch enumeration exceeded max_depth=" +
                               std::to_string(max_depth_));
    }
    const bool value =
        index < prefix_.size() ? static_cast<bool>(prefix_[index]) : p_true > kZeroProbTol;
    const double prob = value ? p_true : 1.0 - p_true;
    trace_.push_back({kind, value, prob});
    alternative_live_.push_back(index >= prefix_.size() && 1.0 - prob > kZeroProbTol);
    return value;
  }

  const std::vector<BranchDraw>& trace() const { return trace_; }
  bool alternative_live(std::size_t index) const { return alternative_live_[index]; }

 private:
  const std::vector<bool>& prefix_;
  int max_depth_;
  std::vector<BranchDraw> trace_;
  std::vector<bool> alternative_live_;
};

}  // namespace

TrialRecord run_trial(const ScenarioConfig& config, Seed seed, std::uint64_t trial_index) {
  require_runnable(config);
  RandomSource source = RandomSource::for_trial(seed, trial_index);
  TrialRecord record;
  record.trial_index = trial_index;
  record.outcome = run_scenario_once(config, source);
  record.branch_trace.assign(source.trace().begin(), source.trace().end());
  return record;
}

RunStats run_trials(const ScenarioConfig& config, std::uint64_t n_trials, Seed seed) {
  require_runnable(config);
  if (n_trials == 0) {
    throw std::invalid_argument("run_trials needs n_trials >= 1 (0 selects exact mode)");
  }

  RunStats stats;
  stats.n_trials = n_trials;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t successes = 0;
  std::uint64_t parity_checks = 0;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    const TrialRecord rec = run_trial(config, seed, i);
    counts[rec.outcome.outcome] += 1;
    if (rec.outcome.success) ++successes;
    parity_checks += static_cast<std::uint64_t>(rec.outcome.parity_checks);
    stats.anticorrelation_violations +=
        static_cast<std::uint64_t>(rec.outcome.anticorrelation_violations);
    if (!rec.outcome.state_verified) ++stats.state_check_failures;
    if (!rec.outcome.success) stats.failures[rec.outcome.failure_reason] += 1;
  }
  for (const auto& [key, count] : counts) {
    stats.outcomes[key] = make_stats(count, n_trials);
  }
  stats.success_rate = static_cast<double>(successes) / static_cast<double>(n_trials);
  stats.mean_parity_checks =
      static_cast<double>(parity_checks) / static_cast<double>(n_trials);
  return stats;
}

RunStats run_trials(const ScenarioConfig& config) {
  return run_trials(config, config.trials, Seed{config.seed});
}

ExactResult exhaustive_branches(const ScenarioConfig& config, int max_depth) {
  require_runnable(config);
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");

  ExactResult result;
  std::deque<std::vector<bool>> work;
  work.push_back({});
  while (!work.empty()) {
    const std::vector<bool> prefix = std::move(work.front());
    work.pop_front();

    EnumerationSource source(prefix, max_depth);
    TrialOutcome outcome = run_scenario_once(config, source);

    double probability = 1.0;
    for (const BranchDraw& draw : source.trace()) probability *= draw.probability;

    // Each flip freezes everything up to and including its position, so
    // every leaf of the binary branch tree is visited exactly once.
    for (std::size_t i = prefix.size(); i < source.trace().size(); ++i) {
      if (!source.alternative_live(i)) continue;
      std::vector<bool> next(i + 1);
      for (std::size_t k = 0; k < i; ++k) next[k] = source.trace()[k].value;
      next[i] = !source.trace()[i].value;
      work.push_back(std::move(next));
    }
    if (result.paths.size() + work.size() > kMaxPaths) {
      throw std::runtime_error("branch enumeration produced more than " +
                               std::to_string(kMaxPaths) + " paths; reduce the scenario");
    }

    result.outcome_probability[outcome.outcome] += probability;
    if (outcome.success) result.success_probability += probability;
    result.total_probability += probability;
    result.paths.push_back({source.trace(), probability, std::move(outcome)});
  }
  return result;
}

}  // namespace qdsim
