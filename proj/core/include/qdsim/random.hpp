#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace qdsim {

// Probabilities at or below this threshold are treated as impossible when an
// outcome is forced.
inline constexpr double kZeroProbTol = 1e-12;

enum class BranchKind { Parity, Swap };

std::string_view to_string(BranchKind kind);

// One sampled binary branch. `probability` is the probability of the value
// that was actually taken.
struct BranchDraw {
  BranchKind kind;
  bool value;
  double probability;

  bool operator==(const BranchDraw&) const = default;
};

struct Seed {
  std::uint64_t master = 1;

  bool operator==(const Seed&) const = default;
};

// Counter-mode derivation of a per-trial stream seed. Independent of any
// other trial's stream and of the order trials are executed in.
std::uint64_t derive_stream_seed(Seed seed, std::uint64_t trial_index);

// Every random decision in the simulator flows through this interface, so a
// protocol run is a deterministic function of the values returned here.
class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;

  // Returns true with probability p_true.
  virtual bool draw(BranchKind kind, double p_true) = 0;
};

class RandomSource final : public OutcomeSource {
 public:
  explicit RandomSource(std::uint64_t raw_seed);
  static RandomSource for_trial(Seed seed, std::uint64_t trial_index);

  bool draw(BranchKind kind, double p_true) override;

  std::span<const BranchDraw> trace() const { return trace_; }

 private:
  std::mt19937_64 rng_;
  std::vector<BranchDraw> trace_;
};

// Replays queued outcomes per branch kind; kinds without a queued value fall
// back to `fallback` (required for those draws). Forcing an outcome whose
// probability is zero throws instead of renormalizing it into existence.
class ScriptedSource final : public OutcomeSource {
 public:
  explicit ScriptedSource(OutcomeSource* fallback = nullptr);

  void push(BranchKind kind, bool value);
  bool draw(BranchKind kind, double p_true) override;

  std::span<const BranchDraw> trace() const { return trace_; }

 private:
  std::deque<bool> script_[2];
  OutcomeSource* fallback_;
  std::vector<BranchDraw> trace_;
};

// Pins a branch kind to a constant value; everything else is delegated.
class OverrideSource final : public OutcomeSource {
 public:
  OverrideSource(OutcomeSource& inner, std::optional<bool> parity_value,
                 std::optional<bool> swap_value);

  bool draw(BranchKind kind, double p_true) override;

 private:
  OutcomeSource& inner_;
  std::optional<bool> forced_[2];
};

}  // namespace qdsim
