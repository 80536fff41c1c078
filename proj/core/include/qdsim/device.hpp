#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdsim/random.hpp"
#include "qdsim/state.hpp"

namespace qdsim {

struct DotId {
  std::string label;

  bool operator==(const DotId&) const = default;
};

// Static geometry: dots, which pairs are tunnel-coupled for parity readout,
// and which charge detector monitors which dot (detector ids are 1-based and
// dense).
class DeviceLayout {
 public:
  DeviceLayout(std::vector<DotId> dots, std::vector<std::pair<DotId, DotId>> coupled_pairs,
               std::vector<DotId> detector_dots);

  // Two dots A,B with detectors D1->A, D2->B and the single coupled pair.
  static DeviceLayout fig1();
  // Chain A-B-C, a detector on every dot, parity events happen in B.
  static DeviceLayout fig2();
  // Linear chain of num_dots dots labeled A, B, C, ... with a detector each.
  static DeviceLayout chain(int num_dots);

  int dot_count() const { return static_cast<int>(dots_.size()); }
  const std::vector<DotId>& dots() const { return dots_; }
  const DotId& dot(int index) const { return dots_[static_cast<std::size_t>(index)]; }
  int dot_index(const DotId& id) const;  // throws on unknown label
  bool are_coupled(const DotId& a, const DotId& b) const;
  int detector_count() const { return static_cast<int>(detector_dot_.size()); }
  // 1-based detector id monitoring the dot, or 0 if the dot is unmonitored.
  int detector_for(const DotId& id) const;

 private:
  std::vector<DotId> dots_;
  std::vector<std::pair<int, int>> coupled_;
  std::vector<int> detector_dot_;  // detector i+1 monitors dot detector_dot_[i]
};

// Charge readings taken during one parity event: the two detectors flanking
// the event's dot pair, in ascending detector id. A reading of 1 means charge
// present in the monitored dot. Exactly one of the two dots holds the pair,
// so the readings always sum to 1.
struct DetectorSnapshot {
  int step_label = 0;  // strictly increasing per device
  std::array<int, 2> detectors{};
  std::array<int, 2> readings{};

  bool operator==(const DetectorSnapshot&) const = default;
};

// Readings as a two-character string, e.g. "10".
std::string signature(const DetectorSnapshot& snapshot);

int anticorrelation_violations(std::span<const DetectorSnapshot> log);

struct ParityEvent {
  ParityOutcome outcome;
  double probability;  // probability of the realized outcome
  DetectorSnapshot snapshot;
};

// One dot array with its spin register, electron locations, and detector
// log. Value semantics; use one device per trial.
class DeviceState {
 public:
  DeviceState(DeviceLayout layout, PureState spins, std::vector<DotId> electron_dots);

  const DeviceLayout& layout() const { return layout_; }
  const PureState& spins() const { return spins_; }
  int electron_count() const { return spins_.num_qubits(); }
  DotId location(int electron) const;
  std::vector<int> electrons_in(const DotId& dot) const;  // ascending
  int occupancy(const DotId& dot) const;

  // Replaces the spin register; electron count must match.
  void set_spins(PureState spins);

  // Bias-driven move of one electron. Spins are untouched. Destination
  // occupancy stays at most 2.
  void transfer(int electron, const DotId& to);

  // Rotates one electron's spin. The electron must be alone in its dot so the
  // field addresses it individually.
  void apply_hadamard(int electron);

  // Splits the two electrons of `from` into targets.first/targets.second
  // (first = lower electron index). The rapid separation loses track of which
  // electron is which: with probability 1/2 the two spin labels are swapped
  // first. Returns whether the swap branch was taken.
  bool separate_nonadiabatic(const DotId& from, std::pair<DotId, DotId> targets,
                             OutcomeSource& source);

  // Spin-parity readout of the two electrons in `home` against the empty
  // coupled `partner`: antiparallel pairs tunnel to the partner, parallel
  // pairs stay. The projected spin state is untouched inside its subspace.
  // Appends one DetectorSnapshot to the log.
  ParityEvent parity_measure(const DotId& home, const DotId& partner, OutcomeSource& source);

  std::span<const DetectorSnapshot> read_log() const { return log_; }

 private:
  int dot_of(int electron) const;
  void check_electron(int electron, const char* op) const;

  DeviceLayout layout_;
  PureState spins_;
  std::vector<int> location_;  // electron -> dot index
  std::vector<DetectorSnapshot> log_;
  int next_step_ = 1;
};

}  // namespace qdsim
