#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdsim/montecarlo.hpp"
#include "qdsim/protocols.hpp"
#include "qdsim/scenario.hpp"

namespace qdsim {

// One row of the detector-signature table: a Bell input, the two readout
// signatures it produces, and the label the analyzer reports back.
struct SignatureRow {
  BellLabel input = BellLabel::PhiPlus;
  std::string first;   // D1D2 bits at the first readout
  std::string second;  // D1D2 bits at the second readout
  BellLabel identified = BellLabel::PhiPlus;
  bool restored = false;

  bool operator==(const SignatureRow&) const = default;
};

// The four-row signature table, inputs ordered psi_plus, psi_minus,
// phi_plus, phi_minus. Deterministic: eigenstate inputs leave nothing to
// sample, and the separation branch cannot reach the detectors.
std::vector<SignatureRow> signature_table();

struct ResultDocument {
  std::string version;
  ScenarioConfig scenario;
  std::optional<RunStats> stats;        // sampled mode (trials >= 1)
  std::optional<ExactResult> exact;     // exact mode (trials == 0)
  std::vector<SignatureRow> table;      // table1 mode
};

// Dispatches on the scenario: table1 renders the signature table, trials == 0
// enumerates branches exactly, anything else samples.
ResultDocument run_command(const ScenarioConfig& config, int max_depth = 64);

// Stable-ordered text document, or the bare data table in csv mode. Every
// float is rendered in shortest round-trip form, so output is bit-stable.
std::string render_document(const ResultDocument& document);

}  // namespace qdsim
