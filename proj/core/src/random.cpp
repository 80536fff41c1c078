#include "qdsim/random.hpp"

#include <stdexcept>
#include <string>

namespace qdsim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

[[noreturn]] void throw_forced_impossible(BranchKind kind, bool value, double p_true) {
  throw std::runtime_error("forced " + std::string(to_string(kind)) + " outcome '" +
                           (value ? "true" : "false") + "' has zero probability (p_true=" +
                           std::to_string(p_true) + ")");
}

void check_forced(BranchKind kind, bool value, double p_true) {
  if (value && p_true <= kZeroProbTol) throw_forced_impossible(kind, value, p_true);
  if (!value && p_true >= 1.0 - kZeroProbTol) throw_forced_impossible(kind, value, p_true);
}

}  // namespace

std::string_view to_string(BranchKind kind) {
  return kind == BranchKind::Parity ? "parity" : "swap";
}

std::uint64_t derive_stream_seed(Seed seed, std::uint64_t trial_index) {
  return splitmix64(seed.master ^ splitmix64(kGolden * (trial_index + 1)));
}

RandomSource::RandomSource(std::uint64_t raw_seed) : rng_(raw_seed) {}

RandomSource RandomSource::for_trial(Seed seed, std::uint64_t trial_index) {
  return RandomSource(derive_stream_seed(seed, trial_index));
}

bool RandomSource::draw(BranchKind kind, double p_true) {
  // 53 uniform bits; [0, 1). Avoids distribution objects so the stream is
  // identical on every standard library.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  const bool value = u < p_true;
  trace_.push_back({kind, value, value ? p_true : 1.0 - p_true});
  return value;
}

ScriptedSource::ScriptedSource(OutcomeSource* fallback) : fallback_(fallback) {}

void ScriptedSource::push(BranchKind kind, bool value) {
  script_[static_cast<int>(kind)].push_back(value);
}

bool ScriptedSource::draw(BranchKind kind, double p_true) {
  auto& queue = script_[static_cast<int>(kind)];
  if (queue.empty()) {
    if (!fallback_) {
      throw std::runtime_error("scripted source has no queued " +
                               std::string(to_string(kind)) + " outcome and no fallback");
    }
    return fallback_->draw(kind, p_true);
  }
  const bool value = queue.front();
  queue.pop_front();
  check_forced(kind, value, p_true);
  trace_.push_back({kind, value, value ? p_true : 1.0 - p_true});
  return value;
}

OverrideSource::OverrideSource(OutcomeSource& inner, std::optional<bool> parity_value,
                               std::optional<bool> swap_value)
    : inner_(inner) {
  forced_[static_cast<int>(BranchKind::Parity)] = parity_value;
  forced_[static_cast<int>(BranchKind::Swap)] = swap_value;
}

bool OverrideSource::draw(BranchKind kind, double p_true) {
  const auto& forced = forced_[static_cast<int>(kind)];
  if (!forced.has_value()) return inner_.draw(kind, p_true);
  check_forced(kind, *forced, p_true);
  return *forced;
}

}  // namespace qdsim
