#include "qdsim/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qdsim {

namespace {

constexpr double kInvSqrt2 = (1.0 / std::numbers::sqrt2);
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_qubit(const PureState& state, int qubit, const char* op) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::invalid_argument(std::string(op) + ": qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                " qubits");
  }
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string_view to_string(ParityOutcome outcome) {
  return outcome == ParityOutcome::Parallel ? "parallel" : "antiparallel";
}

std::string_view to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return "phi_plus";
    case BellLabel::PhiMinus: return "phi_minus";
    case BellLabel::PsiPlus: return "psi_plus";
    case BellLabel::PsiMinus: return "psi_minus";
  }
  throw std::invalid_argument("unknown Bell label");
}

bool parallel_spins(BellLabel label) {
  return label == BellLabel::PhiPlus || label == BellLabel::PhiMinus;
}

PureState::PureState(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits_ < 1 || num_qubits_ > kMaxQubits) {
    throw std::invalid_argument("PureState: qubit count " + std::to_string(num_qubits_) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (amps_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument("PureState: amplitude vector size " +
                                std::to_string(amps_.size()) + " does not match " +
                                std::to_string(num_qubits_) + " qubits");
  }
  double norm2 = 0.0;
  for (const Complex& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("PureState: non-finite amplitude");
    }
    norm2 += std::norm(a);
  }
  if (norm2 <= kZeroProbTol * kZeroProbTol) {
    throw std::invalid_argument("PureState: zero-norm amplitude vector");
  }
  // Leave already-normalized input untouched so norm drift of individual
  // operations stays observable.
  if (std::abs(norm2 - 1.0) > kStateNormTol) {
    const double scale = 1.0 / std::sqrt(norm2);
    for (Complex& a : amps_) a *= scale;
  }
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("basis: qubit count out of range");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw std::invalid_argument("basis: index out of range");
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  amps[index] = Complex{1.0, 0.0};
  return PureState(num_qubits, std::move(amps));
}

double PureState::norm_squared() const {
  double norm2 = 0.0;
  for (const Complex& a : amps_) norm2 += std::norm(a);
  return norm2;
}

std::uint64_t basis_index(std::string_view spins) {
  if (spins.empty() || spins.size() > kMaxQubits) {
    throw std::invalid_argument("basis_index: spin string length out of range");
  }
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const char c = spins[i];
    if (c == 'd' || c == 'D' || c == '1') {
      index |= std::uint64_t{1} << i;
    } else if (c != 'u' && c != 'U' && c != '0') {
      throw std::invalid_argument("basis_index: unexpected character '" + std::string(1, c) +
                                  "' (use u/d or 0/1)");
    }
  }
  return index;
}

std::string spin_string(std::uint64_t index, int num_qubits) {
  std::string out(static_cast<std::size_t>(num_qubits), 'u');
  for (int k = 0; k < num_qubits; ++k) {
    if ((index >> k) & 1) out[static_cast<std::size_t>(k)] = 'd';
  }
  return out;
}

PureState make_state(int num_qubits, std::span<const AmplitudeAssignment> assignments) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("make_state: qubit count out of range");
  }
  if (assignments.empty()) {
    throw std::invalid_argument("make_state: no amplitude assignments");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  for (const auto& [index, value] : assignments) {
    if (index >= dim) {
      throw std::invalid_argument("make_state: basis index " + std::to_string(index) +
                                  " out of range for " + std::to_string(num_qubits) + " qubits");
    }
    amps[index] += value;
  }
  return PureState(num_qubits, std::move(amps));
}

PureState make_state(int num_qubits, std::initializer_list<AmplitudeAssignment> assignments) {
  return make_state(num_qubits, std::span<const AmplitudeAssignment>(assignments.begin(),
                                                                     assignments.size()));
}

PureState bell_state(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus:
      return make_state(2, {{0b00, kInvSqrt2}, {0b11, kInvSqrt2}});
    case BellLabel::PhiMinus:
      return make_state(2, {{0b00, kInvSqrt2}, {0b11, -kInvSqrt2}});
    case BellLabel::PsiPlus:
      return make_state(2, {{0b10, kInvSqrt2}, {0b01, kInvSqrt2}});
    case BellLabel::PsiMinus:
      return make_state(2, {{0b10, kInvSqrt2}, {0b01, -kInvSqrt2}});
  }
  throw std::invalid_argument("unknown Bell label");
}

PureState apply_hadamard(const PureState& state, int qubit) {
  check_qubit(state, qubit, "apply_hadamard");
  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | bit];
    amps[i] = (a0 + a1) * kInvSqrt2;
    amps[i | bit] = (a0 - a1) * kInvSqrt2;
  }
  return PureState(state.num_qubits(), std::move(amps));
}

PureState apply_swap(const PureState& state, int q1, int q2) {
  check_qubit(state, q1, "apply_swap");
  check_qubit(state, q2, "apply_swap");
  if (q1 == q2) throw std::invalid_argument("apply_swap: qubit indices must differ");
  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  const std::uint64_t b1 = std::uint64_t{1} << q1;
  const std::uint64_t b2 = std::uint64_t{1} << q2;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & b1) && !(i & b2)) std::swap(amps[i], amps[i ^ b1 ^ b2]);
  }
  return PureState(state.num_qubits(), std::move(amps));
}

PureState tensor(const PureState& lhs, const PureState& rhs) {
  const int total = lhs.num_qubits() + rhs.num_qubits();
  if (total > kMaxQubits) {
    throw std::invalid_argument("tensor: combined qubit count exceeds " +
                                std::to_string(kMaxQubits));
  }
  std::vector<Complex> amps(std::size_t{1} << total);
  const auto a = lhs.amplitudes();
  const auto b = rhs.amplitudes();
  for (std::size_t ib = 0; ib < b.size(); ++ib) {
    const std::size_t high = ib << lhs.num_qubits();
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
      amps[high | ia] = a[ia] * b[ib];
    }
  }
  return PureState(total, std::move(amps));
}

double parallel_probability(const PureState& state, int q1, int q2) {
  check_qubit(state, q1, "parallel_probability");
  check_qubit(state, q2, "parallel_probability");
  if (q1 == q2) throw std::invalid_argument("parallel_probability: qubit indices must differ");
  const std::uint64_t b1 = std::uint64_t{1} << q1;
  const std::uint64_t b2 = std::uint64_t{1} << q2;
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (static_cast<bool>(i & b1) == static_cast<bool>(i & b2)) p += std::norm(amps[i]);
  }
  return clamp01(p);
}

namespace {

ParityProjection project_parity_to(const PureState& state, int q1, int q2,
                                   ParityOutcome outcome, double probability) {
  const std::uint64_t b1 = std::uint64_t{1} << q1;
  const std::uint64_t b2 = std::uint64_t{1} << q2;
  const bool keep_equal = outcome == ParityOutcome::Parallel;
  const double scale = 1.0 / std::sqrt(probability);
  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const bool equal = static_cast<bool>(i & b1) == static_cast<bool>(i & b2);
    if (equal == keep_equal) {
      amps[i] *= scale;
    } else {
      amps[i] = Complex{0.0, 0.0};
    }
  }
  return {outcome, probability, PureState(state.num_qubits(), std::move(amps))};
}

}  // namespace

ParityProjection project_parity(const PureState& state, int q1, int q2,
                                OutcomeSource& source) {
  const double p_parallel = parallel_probability(state, q1, q2);
  const bool parallel = source.draw(BranchKind::Parity, p_parallel);
  const ParityOutcome outcome =
      parallel ? ParityOutcome::Parallel : ParityOutcome::Antiparallel;
  return project_parity_to(state, q1, q2, outcome,
                           parallel ? p_parallel : 1.0 - p_parallel);
}

ParityProjection project_parity(const PureState& state, int q1, int q2,
                                ParityOutcome forced) {
  const double p_parallel = parallel_probability(state, q1, q2);
  const double p = forced == ParityOutcome::Parallel ? p_parallel : 1.0 - p_parallel;
  if (p <= kZeroProbTol) {
    throw std::runtime_error(std::string("project_parity: forced outcome '") +
                             std::string(to_string(forced)) + "' has zero probability");
  }
  return project_parity_to(state, q1, q2, forced, p);
}

BellCoefficients bell_decompose(const PureState& state, int q1, int q2) {
  check_qubit(state, q1, "bell_decompose");
  check_qubit(state, q2, "bell_decompose");
  if (q1 == q2) throw std::invalid_argument("bell_decompose: qubit indices must differ");

  const int nq = state.num_qubits();
  const std::size_t rest_dim = std::size_t{1} << (nq - 2);
  // columns[r][s]: s = spin of q1 | spin of q2 << 1, r = packed remaining bits.
  std::vector<std::array<Complex, 4>> columns(rest_dim);
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const int s = static_cast<int>((i >> q1) & 1) | (static_cast<int>((i >> q2) & 1) << 1);
    std::uint64_t r = 0;
    int out_bit = 0;
    for (int k = 0; k < nq; ++k) {
      if (k == q1 || k == q2) continue;
      r |= ((i >> k) & 1) << out_bit;
      ++out_bit;
    }
    columns[r][static_cast<std::size_t>(s)] = amps[i];
  }

  std::size_t ref = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < rest_dim; ++r) {
    double w = 0.0;
    for (const Complex& c : columns[r]) w += std::norm(c);
    if (w > best) {
      best = w;
      ref = r;
    }
  }
  std::array<Complex, 4> pair = columns[ref];
  const double pair_norm = std::sqrt(best);
  for (Complex& c : pair) c /= pair_norm;

  // The pair factors out iff every column is proportional to the reference.
  double residual = 0.0;
  for (std::size_t r = 0; r < rest_dim; ++r) {
    Complex overlap{0.0, 0.0};
    for (int s = 0; s < 4; ++s) {
      overlap += std::conj(pair[static_cast<std::size_t>(s)]) *
                 columns[r][static_cast<std::size_t>(s)];
    }
    for (int s = 0; s < 4; ++s) {
      residual += std::norm(columns[r][static_cast<std::size_t>(s)] -
                            overlap * pair[static_cast<std::size_t>(s)]);
    }
  }
  if (residual > kEntangleTol) {
    throw std::invalid_argument("bell_decompose: designated qubits are entangled with the rest");
  }

  return BellCoefficients{
      (pair[0] + pair[3]) * kInvSqrt2,
      (pair[0] - pair[3]) * kInvSqrt2,
      (pair[2] + pair[1]) * kInvSqrt2,
      (pair[2] - pair[1]) * kInvSqrt2,
  };
}

PureState state_from_bell(const BellCoefficients& c) {
  std::vector<Complex> amps(4);
  amps[0b00] = (c.phi_plus + c.phi_minus) * kInvSqrt2;
  amps[0b11] = (c.phi_plus - c.phi_minus) * kInvSqrt2;
  amps[0b10] = (c.psi_plus + c.psi_minus) * kInvSqrt2;
  amps[0b01] = (c.psi_plus - c.psi_minus) * kInvSqrt2;
  return PureState(2, std::move(amps));
}

double fidelity_up_to_phase(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("fidelity_up_to_phase: qubit count mismatch");
  }
  Complex overlap{0.0, 0.0};
  const auto aa = a.amplitudes();
  const auto bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) overlap += std::conj(aa[i]) * bb[i];
  return clamp01(std::norm(overlap));
}

GhzClassResult is_ghz_class(const PureState& state, double tol) {
  const auto amps = state.amplitudes();
  const std::uint64_t mask = (state.dim() - 1);
  std::uint64_t top = 0;
  double top_weight = -1.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const double w = std::norm(amps[i]);
    if (w > top_weight) {
      top_weight = w;
      top = i;
    }
  }
  const std::uint64_t other = ~top & mask;
  const double other_weight = std::norm(amps[other]);
  double rest = 0.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i != top && i != other) rest += std::norm(amps[i]);
  }
  if (std::abs(top_weight - 0.5) > tol || std::abs(other_weight - 0.5) > tol || rest > tol) {
    return {};
  }
  std::uint64_t branch = top;
  std::uint64_t partner = other;
  if (branch & 1) std::swap(branch, partner);
  double phase = std::arg(amps[partner] * std::conj(amps[branch]));
  if (phase < 0) phase += kTwoPi;
  if (phase >= kTwoPi) phase -= kTwoPi;
  return {true, branch, phase};
}

std::string to_string(const PureState& state) {
  std::ostringstream out;
  bool first = true;
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (std::norm(amps[i]) < 1e-24) continue;
    if (!first) out << " + ";
    out << "(" << amps[i].real() << (amps[i].imag() < 0 ? "" : "+") << amps[i].imag() << "i)|"
        << spin_string(i, state.num_qubits()) << ">";
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace qdsim
