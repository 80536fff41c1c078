#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "qdsim/state.hpp"

namespace qdsim::testing {

// Haar-ish random state: independent gaussian components, normalized by the
// PureState constructor.
inline PureState random_state(int num_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  for (Complex& a : amps) a = Complex{gauss(rng), gauss(rng)};
  return PureState(num_qubits, std::move(amps));
}

inline BellCoefficients random_bell_coefficients(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Complex c[4];
  double norm2 = 0.0;
  for (Complex& z : c) {
    z = Complex{gauss(rng), gauss(rng)};
    norm2 += std::norm(z);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  return {c[0] * scale, c[1] * scale, c[2] * scale, c[3] * scale};
}

inline void check_amplitudes_close(const PureState& actual, const PureState& expected,
                                   double tol) {
  REQUIRE(actual.num_qubits() == expected.num_qubits());
  for (std::uint64_t i = 0; i < actual.dim(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(actual.amplitude(i) - expected.amplitude(i)) <= tol);
  }
}

// Four-sigma band for an empirical frequency of a probability-q event.
inline double mc_tolerance(double q, double n) {
  return 4.0 * std::sqrt(q * (1.0 - q) / n);
}

}  // namespace qdsim::testing
