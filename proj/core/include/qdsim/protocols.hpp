#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdsim/device.hpp"

namespace qdsim {

// Record of one QND Bell-state measurement: the two detector signatures, the
// classified label, and the state left behind.
struct BellQndRecord {
  BellLabel label;
  DetectorSnapshot snapshot_t;
  DetectorSnapshot snapshot_2t;
  PureState final_state;
  bool restored;  // final state matches the input up to global phase
};

struct BellGenerationResult {
  BellLabel label;
  PureState state;  // canonical state of `label` up to global phase
};

struct GhzTraceEntry {
  std::pair<int, int> checked;  // electron indices compared
  ParityOutcome outcome;
  bool swapped;  // swap branch of the separation following the check; false if none ran

  bool operator==(const GhzTraceEntry&) const = default;
};

struct GhzRunRecord {
  bool success;
  int rounds_used;    // largest number of check rounds any single step needed
  int parity_checks;  // every parity event across the run
  GhzClassResult final;
  PureState final_state;
  std::vector<GhzTraceEntry> outcome_trace;
  int anticorrelation_violations;
  std::string failure_reason;  // empty on success
};

enum class GrowthStrategy { Sequential, PairMerge };
std::string_view to_string(GrowthStrategy strategy);

struct GrowthPlan {
  GrowthStrategy strategy = GrowthStrategy::Sequential;
  int n = 2;           // target party count, >= 2
  int max_rounds = 1;  // check rounds per growth step, >= 1
};

// Two-dot device for the QND sequence: electron 0 in A, electron 1 in B,
// spin register preloaded with `pair_state`.
DeviceState make_fig1_device(const PureState& pair_state);

// Three-dot device staged for ghz3_prepare: electrons 0 and 1 share dot B in
// a phi_plus pair, electron 2 sits in dot C in (|u> + |d>)/sqrt2.
DeviceState make_ghz3_device();

// Runs the two-window parity sequence on the device's spin register:
// load both electrons into one dot, parity readout, nonadiabatic separation,
// a Hadamard on each spin, reload, second readout, final separation and
// Hadamards. The second window opens from whichever dot the pair occupied
// after the first readout; the two signatures then identify the Bell
// component uniquely, and Bell inputs come out unchanged up to global phase.
BellQndRecord bell_qnd(const PureState& input, DeviceState& device, OutcomeSource& source);

// Same sequence used as a source: collapses an arbitrary two-spin input onto
// a Bell state with the Born-rule weights of its Bell decomposition.
BellGenerationResult bell_generate(const PureState& input, DeviceState& device,
                                   OutcomeSource& source);

// Parity-check cascade growing phi_plus (electrons 0,1) + a fresh spin
// (electron 2) into a three-party GHZ state. Checks (1,2) first, then
// alternates (0,1), (1,2), ... after failures, up to max_rounds checks.
// Succeeds as soon as one check reads parallel: 1 - 2^-max_rounds overall.
GhzRunRecord ghz3_prepare(int max_rounds, DeviceState& device, OutcomeSource& source);

struct MergeResult {
  bool success;
  PureState state;
  GhzTraceEntry trace;
};

// Joins two GHZ-class states by a single parity check of the two boundary
// electrons (device must hold every electron alone in its dot, left copy
// first). Parallel (probability 1/2) leaves a GHZ-class state on all
// electrons and the boundary pair is separated back; antiparallel reports
// failure with the projected state returned for inspection.
MergeResult ghz_merge(const PureState& left, const PureState& right, DeviceState& device,
                      OutcomeSource& source);

// Grows an n-party GHZ state on an internally built chain device. Bell pairs
// are taken as prepared resources. Sequential extends one electron at a time
// (each extension a max_rounds cascade); PairMerge folds in a fresh Bell pair
// per step with single-shot checks, starting from a three-party max_rounds=1
// base when n is odd.
GhzRunRecord ghz_prepare(const GrowthPlan& plan, OutcomeSource& source);

}  // namespace qdsim
