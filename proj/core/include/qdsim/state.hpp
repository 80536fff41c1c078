#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdsim/random.hpp"

namespace qdsim {

// Spin-basis conventions used throughout:
//   - bit k of an amplitude index is the spin of qubit k,
//   - bit value 0 is spin-up, bit value 1 is spin-down,
//   - in a spin string such as "ud", character i is qubit i.
// Bell states on a qubit pair (q1, q2):
//   phi_plus  = (|uu> + |dd>)/sqrt2      phi_minus = (|uu> - |dd>)/sqrt2
//   psi_plus  = (|ud> + |du>)/sqrt2      psi_minus = (|ud> - |du>)/sqrt2
// where the first symbol is q1 and the second is q2.

inline constexpr int kMaxQubits = 24;
inline constexpr double kStateNormTol = 1e-10;  // stored-state norm invariant
inline constexpr double kOpDriftTol = 1e-12;    // per-operation norm drift
inline constexpr double kGhzTol = 1e-9;         // default GHZ-class detection
inline constexpr double kEntangleTol = 1e-10;   // pair/rest separability check

using Complex = std::complex<double>;

enum class ParityOutcome { Parallel, Antiparallel };
std::string_view to_string(ParityOutcome outcome);

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
std::string_view to_string(BellLabel label);

// Phi states have parallel spins, Psi states antiparallel ones.
bool parallel_spins(BellLabel label);

// Coefficients of a two-qubit state in the Bell basis, ordered
// (phi_plus, phi_minus, psi_plus, psi_minus). Unit norm.
struct BellCoefficients {
  Complex phi_plus;
  Complex phi_minus;
  Complex psi_plus;
  Complex psi_minus;

  bool operator==(const BellCoefficients&) const = default;
};

struct GhzClassResult {
  bool is_ghz = false;
  std::uint64_t bitmask = 0;      // branch whose first qubit is spin-up
  double relative_phase = 0.0;    // in [0, 2*pi)
};

// Dense amplitude vector over all spin configurations. Immutable after
// construction; operations return new states.
class PureState {
 public:
  // Rescales to unit norm unless the input is already normalized within
  // kStateNormTol, in which case amplitudes are stored untouched. Throws on
  // non-finite amplitudes, zero norm, or a size mismatch.
  PureState(int num_qubits, std::vector<Complex> amplitudes);

  static PureState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  Complex amplitude(std::uint64_t index) const { return amps_[index]; }
  std::span<const Complex> amplitudes() const { return amps_; }
  double norm_squared() const;

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

// Index of the basis state described by a spin string ('u'/'0' up, 'd'/'1'
// down; character i is qubit i).
std::uint64_t basis_index(std::string_view spins);
std::string spin_string(std::uint64_t index, int num_qubits);

using AmplitudeAssignment = std::pair<std::uint64_t, Complex>;

// Builds the normalized state with the given amplitudes and zeros elsewhere.
// Contributions to the same index accumulate.
PureState make_state(int num_qubits, std::span<const AmplitudeAssignment> assignments);
PureState make_state(int num_qubits, std::initializer_list<AmplitudeAssignment> assignments);

PureState bell_state(BellLabel label);

PureState apply_hadamard(const PureState& state, int qubit);
PureState apply_swap(const PureState& state, int q1, int q2);

// Combined register with `rhs` qubits stacked above `lhs` qubits: qubit k of
// rhs becomes qubit lhs.num_qubits() + k.
PureState tensor(const PureState& lhs, const PureState& rhs);

// Probability that qubits q1 and q2 carry equal spins.
double parallel_probability(const PureState& state, int q1, int q2);

struct ParityProjection {
  ParityOutcome outcome;
  double probability;  // probability of the realized outcome
  PureState state;     // renormalized projection; untouched inside its subspace
};

ParityProjection project_parity(const PureState& state, int q1, int q2,
                                OutcomeSource& source);
// Forces the outcome; throws if the forced outcome has zero probability.
ParityProjection project_parity(const PureState& state, int q1, int q2,
                                ParityOutcome forced);

// Bell-basis coefficients of the (q1, q2) pair. The pair must be unentangled
// with every other qubit (verified within kEntangleTol, throws otherwise).
// For states with more than two qubits the overall phase of the pair factor
// is fixed by an internal reference and is meaningful only up to that choice.
BellCoefficients bell_decompose(const PureState& state, int q1 = 0, int q2 = 1);

// Two-qubit synthesis; inverse of bell_decompose on two-qubit states.
PureState state_from_bell(const BellCoefficients& coefficients);

// |<a|b>|^2, insensitive to global phase.
double fidelity_up_to_phase(const PureState& a, const PureState& b);

// Detects states of the form (|b> + e^{i phi}|~b>)/sqrt2 where ~b flips every
// spin. The reported bitmask is the branch whose qubit 0 is spin-up.
GhzClassResult is_ghz_class(const PureState& state, double tol = kGhzTol);

// Compact debug rendering of the non-negligible amplitudes.
std::string to_string(const PureState& state);

}  // namespace qdsim
