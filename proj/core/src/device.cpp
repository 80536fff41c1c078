#include "qdsim/device.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdsim {

DeviceLayout::DeviceLayout(std::vector<DotId> dots,
                           std::vector<std::pair<DotId, DotId>> coupled_pairs,
                           std::vector<DotId> detector_dots)
    : dots_(std::move(dots)) {
  if (dots_.empty()) throw std::invalid_argument("DeviceLayout: no dots");
  for (std::size_t i = 0; i < dots_.size(); ++i) {
    for (std::size_t j = i + 1; j < dots_.size(); ++j) {
      if (dots_[i] == dots_[j]) {
        throw std::invalid_argument("DeviceLayout: duplicate dot label '" + dots_[i].label + "'");
      }
    }
  }
  for (const auto& [a, b] : coupled_pairs) {
    const int ia = dot_index(a);
    const int ib = dot_index(b);
    if (ia == ib) throw std::invalid_argument("DeviceLayout: dot coupled with itself");
    coupled_.emplace_back(ia, ib);
  }
  for (const DotId& d : detector_dots) detector_dot_.push_back(dot_index(d));
}

DeviceLayout DeviceLayout::fig1() {
  return DeviceLayout({{"A"}, {"B"}}, {{{"A"}, {"B"}}}, {{"A"}, {"B"}});
}

DeviceLayout DeviceLayout::fig2() { return chain(3); }

DeviceLayout DeviceLayout::chain(int num_dots) {
  if (num_dots < 1 || num_dots > 26) {
    throw std::invalid_argument("chain: dot count out of range");
  }
  std::vector<DotId> dots;
  std::vector<std::pair<DotId, DotId>> coupled;
  for (int i = 0; i < num_dots; ++i) {
    dots.push_back({std::string(1, static_cast<char>('A' + i))});
  }
  for (int i = 0; i + 1 < num_dots; ++i) coupled.emplace_back(dots[i], dots[i + 1]);
  return DeviceLayout(dots, coupled, dots);
}

int DeviceLayout::dot_index(const DotId& id) const {
  for (std::size_t i = 0; i < dots_.size(); ++i) {
    if (dots_[i] == id) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown dot '" + id.label + "'");
}

bool DeviceLayout::are_coupled(const DotId& a, const DotId& b) const {
  const int ia = dot_index(a);
  const int ib = dot_index(b);
  for (const auto& [x, y] : coupled_) {
    if ((x == ia && y == ib) || (x == ib && y == ia)) return true;
  }
  return false;
}

int DeviceLayout::detector_for(const DotId& id) const {
  const int dot = dot_index(id);
  for (std::size_t i = 0; i < detector_dot_.size(); ++i) {
    if (detector_dot_[i] == dot) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::string signature(const DetectorSnapshot& snapshot) {
  std::string out;
  for (int r : snapshot.readings) out += static_cast<char>('0' + r);
  return out;
}

int anticorrelation_violations(std::span<const DetectorSnapshot> log) {
  int violations = 0;
  for (const DetectorSnapshot& s : log) {
    if (s.readings[0] + s.readings[1] != 1) ++violations;
  }
  return violations;
}

DeviceState::DeviceState(DeviceLayout layout, PureState spins, std::vector<DotId> electron_dots)
    : layout_(std::move(layout)), spins_(std::move(spins)) {
  if (electron_dots.size() != static_cast<std::size_t>(spins_.num_qubits())) {
    throw std::invalid_argument("DeviceState: electron placement does not match spin register");
  }
  for (const DotId& d : electron_dots) location_.push_back(layout_.dot_index(d));
  for (const DotId& d : layout_.dots()) {
    if (occupancy(d) > 2) {
      throw std::invalid_argument("DeviceState: dot '" + d.label + "' holds more than 2 electrons");
    }
  }
}

DotId DeviceState::location(int electron) const {
  check_electron(electron, "location");
  return layout_.dot(location_[static_cast<std::size_t>(electron)]);
}

std::vector<int> DeviceState::electrons_in(const DotId& dot) const {
  const int idx = layout_.dot_index(dot);
  std::vector<int> result;
  for (std::size_t e = 0; e < location_.size(); ++e) {
    if (location_[e] == idx) result.push_back(static_cast<int>(e));
  }
  return result;
}

int DeviceState::occupancy(const DotId& dot) const {
  const int idx = layout_.dot_index(dot);
  int n = 0;
  for (int loc : location_) n += loc == idx;
  return n;
}

void DeviceState::set_spins(PureState spins) {
  if (spins.num_qubits() != spins_.num_qubits()) {
    throw std::invalid_argument("set_spins: qubit count mismatch");
  }
  spins_ = std::move(spins);
}

void DeviceState::transfer(int electron, const DotId& to) {
  check_electron(electron, "transfer");
  const int dest = layout_.dot_index(to);
  if (location_[static_cast<std::size_t>(electron)] == dest) return;
  if (occupancy(to) >= 2) {
    throw std::invalid_argument("transfer: dot '" + to.label + "' is full");
  }
  location_[static_cast<std::size_t>(electron)] = dest;
}

void DeviceState::apply_hadamard(int electron) {
  check_electron(electron, "apply_hadamard");
  if (occupancy(layout_.dot(dot_of(electron))) != 1) {
    throw std::invalid_argument("apply_hadamard: electron " + std::to_string(electron) +
                                " is not alone in its dot");
  }
  spins_ = qdsim::apply_hadamard(spins_, electron);
}

bool DeviceState::separate_nonadiabatic(const DotId& from, std::pair<DotId, DotId> targets,
                                        OutcomeSource& source) {
  const auto residents = electrons_in(from);
  if (residents.size() != 2) {
    throw std::invalid_argument("separate_nonadiabatic: dot '" + from.label +
                                "' does not hold exactly 2 electrons");
  }
  const int t1 = layout_.dot_index(targets.first);
  const int t2 = layout_.dot_index(targets.second);
  if (t1 == t2) throw std::invalid_argument("separate_nonadiabatic: targets must differ");
  for (int t : {t1, t2}) {
    int occupied = 0;
    for (std::size_t e = 0; e < location_.size(); ++e) {
      if (location_[e] == t && static_cast<int>(e) != residents[0] &&
          static_cast<int>(e) != residents[1]) {
        ++occupied;
      }
    }
    if (occupied >= 2) {
      throw std::invalid_argument("separate_nonadiabatic: target dot '" + layout_.dot(t).label +
                                  "' is full");
    }
  }
  const bool swapped = source.draw(BranchKind::Swap, 0.5);
  if (swapped) spins_ = apply_swap(spins_, residents[0], residents[1]);
  location_[static_cast<std::size_t>(residents[0])] = t1;
  location_[static_cast<std::size_t>(residents[1])] = t2;
  return swapped;
}

ParityEvent DeviceState::parity_measure(const DotId& home, const DotId& partner,
                                        OutcomeSource& source) {
  const auto residents = electrons_in(home);
  if (residents.size() != 2) {
    throw std::invalid_argument("parity_measure: dot '" + home.label +
                                "' does not hold exactly 2 electrons");
  }
  if (occupancy(partner) != 0) {
    throw std::invalid_argument("parity_measure: partner dot '" + partner.label +
                                "' is not empty");
  }
  if (!layout_.are_coupled(home, partner)) {
    throw std::invalid_argument("parity_measure: dots '" + home.label + "' and '" +
                                partner.label + "' are not coupled");
  }
  const int d_home = layout_.detector_for(home);
  const int d_partner = layout_.detector_for(partner);
  if (d_home == 0 || d_partner == 0) {
    throw std::invalid_argument("parity_measure: both dots need a charge detector");
  }

  auto projection = project_parity(spins_, residents[0], residents[1], source);
  spins_ = std::move(projection.state);
  if (projection.outcome == ParityOutcome::Antiparallel) {
    const int dest = layout_.dot_index(partner);
    location_[static_cast<std::size_t>(residents[0])] = dest;
    location_[static_cast<std::size_t>(residents[1])] = dest;
  }

  DetectorSnapshot snapshot;
  snapshot.step_label = next_step_++;
  const DotId first_dot = d_home < d_partner ? home : partner;
  const DotId second_dot = d_home < d_partner ? partner : home;
  snapshot.detectors = {std::min(d_home, d_partner), std::max(d_home, d_partner)};
  snapshot.readings = {occupancy(first_dot) > 0 ? 1 : 0, occupancy(second_dot) > 0 ? 1 : 0};
  log_.push_back(snapshot);

  return {projection.outcome, projection.probability, snapshot};
}

int DeviceState::dot_of(int electron) const {
  return location_[static_cast<std::size_t>(electron)];
}

void DeviceState::check_electron(int electron, const char* op) const {
  if (electron < 0 || electron >= static_cast<int>(location_.size())) {
    throw std::invalid_argument(std::string(op) + ": unknown electron " +
                                std::to_string(electron));
  }
}

}  // namespace qdsim
