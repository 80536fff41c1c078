#include "qdsim/protocols.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace qdsim {

namespace {

constexpr double kRestoreTol = 1e-10;

PureState plus_state() {
  return make_state(1, {{0, (1.0 / std::numbers::sqrt2)}, {1, (1.0 / std::numbers::sqrt2)}});
}

BellLabel classify(ParityOutcome first, ParityOutcome second) {
  if (first == ParityOutcome::Parallel) {
    return second == ParityOutcome::Parallel ? BellLabel::PhiPlus : BellLabel::PhiMinus;
  }
  return second == ParityOutcome::Parallel ? BellLabel::PsiPlus : BellLabel::PsiMinus;
}

struct QndSequence {
  BellLabel label;
  DetectorSnapshot first;
  DetectorSnapshot second;
};

QndSequence run_qnd_sequence(DeviceState& dev, OutcomeSource& src) {
  if (dev.electron_count() != 2 || dev.layout().dot_count() < 2) {
    throw std::invalid_argument("bell_qnd: device needs exactly 2 electrons and 2 dots");
  }
  const DotId a = dev.layout().dot(0);
  const DotId b = dev.layout().dot(1);

  for (int e : {0, 1}) {
    if (!(dev.location(e) == a)) dev.transfer(e, a);
  }
  const ParityEvent ev1 = dev.parity_measure(a, b, src);
  const DotId home = ev1.outcome == ParityOutcome::Parallel ? a : b;
  const DotId away = home == a ? b : a;

  dev.separate_nonadiabatic(home, {a, b}, src);
  dev.apply_hadamard(0);
  dev.apply_hadamard(1);

  // Reload into the dot the pair occupied after the first readout; the
  // second signature is only informative relative to that starting dot.
  dev.transfer(home == a ? 1 : 0, home);
  const ParityEvent ev2 = dev.parity_measure(home, away, src);
  const DotId home2 = ev2.outcome == ParityOutcome::Parallel ? home : away;

  dev.separate_nonadiabatic(home2, {a, b}, src);
  dev.apply_hadamard(0);
  dev.apply_hadamard(1);

  return {classify(ev1.outcome, ev2.outcome), ev1.snapshot, ev2.snapshot};
}

struct CascadeResult {
  bool success;
  int rounds;
};

// Shared check cascade: electron `fresh` is joined onto the chain whose last
// two members are `prev_prev` (one dot left of `prev`) and `prev`. Odd rounds
// compare (prev, fresh) in prev's dot against fresh's dot; even rounds
// compare (prev_prev, prev) against prev_prev's dot. Every check is followed
// by a separation back to one electron per dot, so the configuration is
// identical at the top of each round.
CascadeResult run_join_cascade(DeviceState& dev, int prev_prev, int prev, int fresh,
                               int max_rounds, OutcomeSource& src,
                               std::vector<GhzTraceEntry>& trace) {
  const DotId home = dev.location(prev);
  const DotId right = dev.location(fresh);
  const DotId left = dev.location(prev_prev);
  for (int round = 1; round <= max_rounds; ++round) {
    const bool odd = round % 2 == 1;
    const int mover = odd ? fresh : prev_prev;
    const DotId partner = odd ? right : left;
    const std::pair<DotId, DotId> spread =
        odd ? std::pair{home, right} : std::pair{left, home};
    const std::pair<int, int> pair = odd ? std::pair{prev, fresh} : std::pair{prev_prev, prev};

    dev.transfer(mover, home);
    const ParityEvent ev = dev.parity_measure(home, partner, src);
    const DotId occupied = ev.outcome == ParityOutcome::Parallel ? home : partner;
    const bool swapped = dev.separate_nonadiabatic(occupied, spread, src);
    trace.push_back({pair, ev.outcome, swapped});
    if (ev.outcome == ParityOutcome::Parallel) return {true, round};
  }
  return {false, max_rounds};
}

GhzRunRecord finish_record(DeviceState& dev, bool success, int rounds,
                           std::vector<GhzTraceEntry> trace, std::string failure_reason) {
  return GhzRunRecord{
      success,
      rounds,
      static_cast<int>(dev.read_log().size()),
      is_ghz_class(dev.spins()),
      dev.spins(),
      std::move(trace),
      anticorrelation_violations(dev.read_log()),
      std::move(failure_reason),
  };
}

// Single-shot boundary merge between electron eL (last of the grown block)
// and eR (first of the fresh pair). On failure the pair stays in eR's dot.
bool merge_step(DeviceState& dev, int eL, int eR, OutcomeSource& src,
                std::vector<GhzTraceEntry>& trace) {
  const DotId dot_l = dev.location(eL);
  const DotId dot_r = dev.location(eR);
  dev.transfer(eR, dot_l);
  const ParityEvent ev = dev.parity_measure(dot_l, dot_r, src);
  if (ev.outcome == ParityOutcome::Parallel) {
    const bool swapped = dev.separate_nonadiabatic(dot_l, {dot_l, dot_r}, src);
    trace.push_back({{eL, eR}, ev.outcome, swapped});
    return true;
  }
  trace.push_back({{eL, eR}, ev.outcome, false});
  return false;
}

}  // namespace

std::string_view to_string(GrowthStrategy strategy) {
  return strategy == GrowthStrategy::Sequential ? "sequential" : "pair_merge";
}

DeviceState make_fig1_device(const PureState& pair_state) {
  if (pair_state.num_qubits() != 2) {
    throw std::invalid_argument("make_fig1_device: input must have 2 qubits");
  }
  return DeviceState(DeviceLayout::fig1(), pair_state, {{"A"}, {"B"}});
}

DeviceState make_ghz3_device() {
  return DeviceState(DeviceLayout::fig2(), tensor(bell_state(BellLabel::PhiPlus), plus_state()),
                     {{"B"}, {"B"}, {"C"}});
}

BellQndRecord bell_qnd(const PureState& input, DeviceState& dev, OutcomeSource& src) {
  if (input.num_qubits() != 2) {
    throw std::invalid_argument("bell_qnd: input must have 2 qubits");
  }
  dev.set_spins(input);
  const QndSequence seq = run_qnd_sequence(dev, src);
  const bool restored = fidelity_up_to_phase(dev.spins(), input) >= 1.0 - kRestoreTol;
  return {seq.label, seq.first, seq.second, dev.spins(), restored};
}

BellGenerationResult bell_generate(const PureState& input, DeviceState& dev,
                                   OutcomeSource& src) {
  if (input.num_qubits() != 2) {
    throw std::invalid_argument("bell_generate: input must have 2 qubits");
  }
  dev.set_spins(input);
  const QndSequence seq = run_qnd_sequence(dev, src);
  return {seq.label, dev.spins()};
}

GhzRunRecord ghz3_prepare(int max_rounds, DeviceState& dev, OutcomeSource& src) {
  if (max_rounds < 1) throw std::invalid_argument("ghz3_prepare: max_rounds must be >= 1");
  if (dev.electron_count() != 3 || dev.layout().dot_count() < 3) {
    throw std::invalid_argument("ghz3_prepare: device needs 3 electrons and 3 dots");
  }
  const DotId a = dev.layout().dot(0);
  const DotId b = dev.layout().dot(1);
  const auto pair = dev.electrons_in(b);
  if (pair.size() != 2 || pair[0] != 0 || pair[1] != 1 ||
      !(dev.location(2) == dev.layout().dot(2))) {
    throw std::invalid_argument(
        "ghz3_prepare: expected electrons 0,1 in the middle dot and electron 2 beyond it");
  }

  std::vector<GhzTraceEntry> trace;
  dev.separate_nonadiabatic(b, {a, b}, src);  // harmless on the symmetric pair
  const CascadeResult cascade = run_join_cascade(dev, 0, 1, 2, max_rounds, src, trace);
  return finish_record(dev, cascade.success, cascade.rounds, std::move(trace),
                       cascade.success ? "" : "cascade_exhausted");
}

MergeResult ghz_merge(const PureState& left, const PureState& right, DeviceState& dev,
                      OutcomeSource& src) {
  if (!is_ghz_class(left).is_ghz || !is_ghz_class(right).is_ghz) {
    throw std::invalid_argument("ghz_merge: both inputs must be GHZ-class");
  }
  const int n_left = left.num_qubits();
  const int total = n_left + right.num_qubits();
  if (dev.electron_count() != total) {
    throw std::invalid_argument("ghz_merge: device electron count does not match inputs");
  }
  for (int e = 0; e < total; ++e) {
    if (dev.occupancy(dev.location(e)) != 1) {
      throw std::invalid_argument("ghz_merge: every electron must sit alone in a dot");
    }
  }
  dev.set_spins(tensor(left, right));
  std::vector<GhzTraceEntry> trace;
  const bool success = merge_step(dev, n_left - 1, n_left, src, trace);
  return {success, dev.spins(), trace.front()};
}

GhzRunRecord ghz_prepare(const GrowthPlan& plan, OutcomeSource& src) {
  if (plan.n < 2) throw std::invalid_argument("ghz_prepare: n must be >= 2");
  if (plan.n > kMaxQubits) {
    throw std::invalid_argument("ghz_prepare: n exceeds " + std::to_string(kMaxQubits));
  }
  if (plan.max_rounds < 1) throw std::invalid_argument("ghz_prepare: max_rounds must be >= 1");

  const int n = plan.n;
  const DeviceLayout layout = DeviceLayout::chain(n);
  std::vector<GhzTraceEntry> trace;

  if (plan.strategy == GrowthStrategy::Sequential) {
    // phi_plus on electrons 0,1 plus fresh superposed spins, one per dot.
    PureState spins = bell_state(BellLabel::PhiPlus);
    for (int e = 2; e < n; ++e) spins = tensor(spins, plus_state());
    std::vector<DotId> dots;
    for (int e = 0; e < n; ++e) dots.push_back(layout.dot(e));
    DeviceState dev(layout, std::move(spins), std::move(dots));

    int rounds_used = 0;
    bool ok = true;
    for (int t = 2; t < n && ok; ++t) {
      const CascadeResult c = run_join_cascade(dev, t - 2, t - 1, t, plan.max_rounds, src, trace);
      rounds_used = std::max(rounds_used, c.rounds);
      ok = c.success;
    }
    return finish_record(dev, ok, rounds_used, std::move(trace),
                         ok ? "" : "cascade_exhausted");
  }

  // PairMerge: Bell pairs on consecutive dots, merged into the grown block
  // one at a time. Odd n starts from the three-party cascade base with a
  // single check round.
  const bool odd = n % 2 == 1;
  PureState spins = bell_state(BellLabel::PhiPlus);
  std::vector<DotId> dots;
  if (odd) {
    spins = tensor(spins, plus_state());
    dots = {layout.dot(1), layout.dot(1), layout.dot(2)};
  } else {
    dots = {layout.dot(0), layout.dot(1)};
  }
  const int base = odd ? 3 : 2;
  for (int e = base; e < n; e += 2) {
    spins = tensor(spins, bell_state(BellLabel::PhiPlus));
    dots.push_back(layout.dot(e));
    dots.push_back(layout.dot(e + 1));
  }
  DeviceState dev(layout, std::move(spins), std::move(dots));

  bool ok = true;
  if (odd) {
    dev.separate_nonadiabatic(layout.dot(1), {layout.dot(0), layout.dot(1)}, src);
    ok = run_join_cascade(dev, 0, 1, 2, 1, src, trace).success;
    if (!ok) {
      return finish_record(dev, false, 1, std::move(trace), "cascade_exhausted");
    }
  }
  for (int grown = base; grown < n && ok; grown += 2) {
    ok = merge_step(dev, grown - 1, grown, src, trace);
  }
  return finish_record(dev, ok, 1, std::move(trace), ok ? "" : "merge_antiparallel");
}

}  // namespace qdsim
