#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qdsim/results.hpp"
#include "qdsim/version.hpp"

namespace {

qdsim::ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qdsim::ScenarioParseError("cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  std::vector<std::string> warnings;
  qdsim::ScenarioConfig cfg = qdsim::parse_scenario(text.str(), &warnings);
  for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
  return cfg;
}

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << body;
  if (!out.good()) throw std::runtime_error("failed writing output file '" + out_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-dot spin-parity protocol simulator"};
  app.set_version_flag("--version", std::string(qdsim::kVersion));
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> force_swap;
  int max_depth = 64;

  const auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the document to this file instead of stdout");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));
  };

  CLI::App* run = app.add_subcommand("run", "sample a scenario with per-trial random streams");
  run->add_option("scenario", scenario_path, "scenario file (key = value lines)")->required();
  run->add_option("--trials", trials, "trial count override (0 switches to exact mode)");
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--force-swap", force_swap, "pin the separation swap branch")
      ->check(CLI::IsMember({"on", "off", "random"}));
  add_output_flags(run);

  CLI::App* exact = app.add_subcommand("exact", "enumerate all branch paths exactly");
  exact->add_option("scenario", scenario_path, "scenario file (key = value lines)")->required();
  exact->add_option("--max-depth", max_depth, "maximum draws per path")
      ->check(CLI::Range(1, 4096));
  exact->add_option("--force-swap", force_swap, "pin the separation swap branch")
      ->check(CLI::IsMember({"on", "off", "random"}));
  add_output_flags(exact);

  CLI::App* table = app.add_subcommand("table1", "print the detector-signature table");
  add_output_flags(table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    qdsim::ScenarioConfig cfg;
    if (app.got_subcommand(table)) {
      cfg.protocol = qdsim::Protocol::Table1;
    } else {
      cfg = load_scenario(scenario_path);
    }
    if (trials) cfg.trials = *trials;
    if (seed) cfg.seed = *seed;
    if (format) {
      cfg.format = *format == "csv" ? qdsim::OutputFormat::Csv : qdsim::OutputFormat::Text;
    }
    if (force_swap) {
      cfg.force_swap = *force_swap == "on"    ? qdsim::ForcedBranch::On
                       : *force_swap == "off" ? qdsim::ForcedBranch::Off
                                              : qdsim::ForcedBranch::Random;
    }
    if (app.got_subcommand(exact)) cfg.trials = 0;

    const qdsim::ResultDocument doc = qdsim::run_command(cfg, max_depth);
    emit(qdsim::render_document(doc), out_path);
    return 0;
  } catch (const qdsim::ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
