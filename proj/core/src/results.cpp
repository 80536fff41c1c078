#include "qdsim/results.hpp"

#include <sstream>
#include <stdexcept>

#include "qdsim/version.hpp"

namespace qdsim {

namespace {

void append_csv_stats(std::ostringstream& out, const RunStats& stats) {
  out << "outcome,count,frequency,ci_low,ci_high\n";
  for (const auto& [key, s] : stats.outcomes) {
    out << key << "," << s.count << "," << format_double(s.frequency) << ","
        << format_double(s.ci_low) << "," << format_double(s.ci_high) << "\n";
  }
}

void append_csv_exact(std::ostringstream& out, const ExactResult& exact) {
  out << "outcome,probability\n";
  for (const auto& [key, p] : exact.outcome_probability) {
    out << key << "," << format_double(p) << "\n";
  }
}

void append_csv_table(std::ostringstream& out, const std::vector<SignatureRow>& table) {
  out << "input,first,second,identified,restored\n";
  for (const SignatureRow& row : table) {
    out << to_string(row.input) << "," << row.first << "," << row.second << ","
        << to_string(row.identified) << "," << (row.restored ? "true" : "false") << "\n";
  }
}

}  // namespace

std::vector<SignatureRow> signature_table() {
  std::vector<SignatureRow> rows;
  for (const BellLabel input : {BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus,
                                BellLabel::PhiMinus}) {
    RandomSource fallback(0);
    OverrideSource source(fallback, std::nullopt, false);
    DeviceState dev = make_fig1_device(bell_state(input));
    const BellQndRecord rec = bell_qnd(bell_state(input), dev, source);
    rows.push_back({input, signature(rec.snapshot_t), signature(rec.snapshot_2t), rec.label,
                    rec.restored});
  }
  return rows;
}

ResultDocument run_command(const ScenarioConfig& config, int max_depth) {
  ResultDocument doc;
  doc.version = std::string(kVersion);
  doc.scenario = config;
  if (config.protocol == Protocol::Table1) {
    doc.table = signature_table();
  } else if (config.trials == 0) {
    doc.exact = exhaustive_branches(config, max_depth);
  } else {
    doc.stats = run_trials(config);
  }
  return doc;
}

std::string render_document(const ResultDocument& document) {
  std::ostringstream out;
  if (document.scenario.format == OutputFormat::Csv) {
    if (!document.table.empty()) {
      append_csv_table(out, document.table);
    } else if (document.exact) {
      append_csv_exact(out, *document.exact);
    } else if (document.stats) {
      append_csv_stats(out, *document.stats);
    }
    return out.str();
  }

  out << "# qdsim results v" << document.version << "\n\n";
  out << "[scenario]\n" << render_scenario(document.scenario);

  if (document.stats) {
    const RunStats& stats = *document.stats;
    out << "\n[result]\n";
    out << "n_trials = " << stats.n_trials << "\n";
    out << "success_rate = " << format_double(stats.success_rate) << "\n";
    out << "mean_parity_checks = " << format_double(stats.mean_parity_checks) << "\n";
    out << "anticorrelation_violations = " << stats.anticorrelation_violations << "\n";
    out << "state_check_failures = " << stats.state_check_failures << "\n";
    out << "\n[outcomes]\n";
    append_csv_stats(out, stats);
    if (!stats.failures.empty()) {
      out << "\n[failures]\nreason,count\n";
      for (const auto& [reason, count] : stats.failures) {
        out << reason << "," << count << "\n";
      }
    }
  }

  if (document.exact) {
    const ExactResult& exact = *document.exact;
    out << "\n[exact]\n";
    out << "paths = " << exact.paths.size() << "\n";
    out << "total_probability = " << format_double(exact.total_probability) << "\n";
    out << "success_probability = " << format_double(exact.success_probability) << "\n";
    out << "\n[outcomes]\n";
    append_csv_exact(out, exact);
  }

  if (!document.table.empty()) {
    out << "\n[table1]\n";
    append_csv_table(out, document.table);
  }
  return out.str();
}

}  // namespace qdsim
