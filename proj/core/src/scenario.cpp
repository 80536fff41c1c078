#include "qdsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace qdsim {

namespace {

struct KeyedValue {
  std::string value;
  int line;
  bool used = false;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ScenarioParseError("scenario:" + std::to_string(line) + ": " + message);
}

double parse_double(std::string_view text, int line, const std::string& key) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    fail(line, "key '" + key + "': expected a number, got '" + std::string(t) + "'");
  }
  return value;
}

std::uint64_t parse_u64(const KeyedValue& kv, const std::string& key) {
  const std::string_view t = trim(kv.value);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    fail(kv.line, "key '" + key + "': expected a non-negative integer, got '" + std::string(t) +
                      "'");
  }
  return value;
}

std::vector<double> parse_number_list(const KeyedValue& kv, const std::string& key) {
  std::vector<double> values;
  std::string_view rest = kv.value;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view piece = rest.substr(0, comma);
    values.push_back(parse_double(piece, kv.line, key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return values;
}

const std::map<std::string, Protocol>& protocol_names() {
  static const std::map<std::string, Protocol> names = {
      {"bell_qnd", Protocol::BellQnd}, {"bell_gen", Protocol::BellGen},
      {"ghz3", Protocol::Ghz3},        {"ghz_n", Protocol::GhzN},
      {"table1", Protocol::Table1},
  };
  return names;
}

const std::map<std::string, BellLabel>& label_names() {
  static const std::map<std::string, BellLabel> names = {
      {"phi_plus", BellLabel::PhiPlus},
      {"phi_minus", BellLabel::PhiMinus},
      {"psi_plus", BellLabel::PsiPlus},
      {"psi_minus", BellLabel::PsiMinus},
  };
  return names;
}

template <typename T>
T lookup(const std::map<std::string, T>& names, const KeyedValue& kv, const std::string& key) {
  const auto it = names.find(std::string(trim(kv.value)));
  if (it == names.end()) {
    std::string options;
    for (const auto& [name, _] : names) {
      if (!options.empty()) options += ", ";
      options += name;
    }
    fail(kv.line, "key '" + key + "': unknown value '" + std::string(trim(kv.value)) +
                      "' (expected one of: " + options + ")");
  }
  return it->second;
}

int count_anticorrelation(std::span<const DetectorSnapshot> log) {
  return anticorrelation_violations(log);
}

TrialOutcome bell_trial(const ScenarioConfig& cfg, OutcomeSource& src, bool qnd) {
  const PureState input = scenario_input_state(cfg);
  DeviceState dev = make_fig1_device(input);
  BellLabel label = BellLabel::PhiPlus;
  PureState final_state = input;
  if (qnd) {
    const BellQndRecord rec = bell_qnd(input, dev, src);
    label = rec.label;
    final_state = rec.final_state;
  } else {
    const BellGenerationResult rec = bell_generate(input, dev, src);
    label = rec.label;
    final_state = rec.state;
  }
  const bool canonical =
      fidelity_up_to_phase(final_state, bell_state(label)) >= 1.0 - 1e-10;
  TrialOutcome out;
  out.outcome = std::string(to_string(label));
  out.success = true;
  out.parity_checks = static_cast<int>(dev.read_log().size());
  out.anticorrelation_violations = count_anticorrelation(dev.read_log());
  out.state_verified = canonical;
  return out;
}

TrialOutcome ghz_trial(const GhzRunRecord& rec) {
  TrialOutcome out;
  out.outcome = rec.success ? "success" : "failure";
  out.success = rec.success;
  out.parity_checks = rec.parity_checks;
  out.anticorrelation_violations = rec.anticorrelation_violations;
  out.state_verified = !rec.success || rec.final.is_ghz;
  out.failure_reason = rec.failure_reason;
  return out;
}

}  // namespace

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::BellQnd: return "bell_qnd";
    case Protocol::BellGen: return "bell_gen";
    case Protocol::Ghz3: return "ghz3";
    case Protocol::GhzN: return "ghz_n";
    case Protocol::Table1: return "table1";
  }
  throw std::invalid_argument("unknown protocol");
}

std::string_view to_string(ForcedBranch mode) {
  switch (mode) {
    case ForcedBranch::Random: return "random";
    case ForcedBranch::On: return "on";
    case ForcedBranch::Off: return "off";
  }
  throw std::invalid_argument("unknown force mode");
}

std::string_view to_string(ForcedParity mode) {
  switch (mode) {
    case ForcedParity::Random: return "random";
    case ForcedParity::Parallel: return "parallel";
    case ForcedParity::Antiparallel: return "antiparallel";
  }
  throw std::invalid_argument("unknown force mode");
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Text ? "text" : "csv";
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

ScenarioConfig parse_scenario(std::string_view text, std::vector<std::string>* warnings) {
  std::map<std::string, KeyedValue> entries;

  const auto add_statement = [&entries](std::string_view statement, int line) {
    const std::size_t eq = statement.find('=');
    if (eq == std::string_view::npos) {
      fail(line, "expected 'key = value', got '" + std::string(statement) + "'");
    }
    std::string key(trim(statement.substr(0, eq)));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key.empty()) fail(line, "empty key");
    if (entries.contains(key)) fail(line, "duplicate key '" + key + "'");
    entries[key] = {std::string(trim(statement.substr(eq + 1))), line};
  };

  // A line is normally one "key = value" statement. The compact one-line form
  // "a=1 b=2 c=3" is also accepted: it applies exactly when every
  // whitespace-separated token carries its own '='.
  const auto add_line = [&add_statement](std::string_view line, int line_no) {
    std::vector<std::string_view> tokens;
    std::string_view rest = line;
    while (!rest.empty()) {
      const std::size_t start = rest.find_first_not_of(" \t");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const std::size_t end = rest.find_first_of(" \t");
      tokens.push_back(rest.substr(0, end));
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    const bool compact = tokens.size() > 1 &&
                         std::all_of(tokens.begin(), tokens.end(), [](std::string_view t) {
                           return t.find('=') != std::string_view::npos;
                         });
    if (compact) {
      for (std::string_view token : tokens) add_statement(token, line_no);
    } else {
      add_statement(line, line_no);
    }
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    add_line(line, line_no);
  }

  auto take = [&entries](const std::string& key) -> KeyedValue* {
    const auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  };

  ScenarioConfig cfg;
  const KeyedValue* protocol = take("protocol");
  if (!protocol) fail(1, "missing required key 'protocol'");
  cfg.protocol = lookup(protocol_names(), *protocol, "protocol");

  const bool bell = cfg.protocol == Protocol::BellQnd || cfg.protocol == Protocol::BellGen;
  if (const KeyedValue* kv = take("input")) {
    if (!bell) fail(kv->line, "key 'input' is only valid for bell_qnd/bell_gen");
    cfg.input_label = lookup(label_names(), *kv, "input");
  }
  if (const KeyedValue* kv = take("amplitudes")) {
    if (!bell) fail(kv->line, "key 'amplitudes' is only valid for bell_qnd/bell_gen");
    if (cfg.input_label) fail(kv->line, "keys 'input' and 'amplitudes' conflict");
    const std::vector<double> values = parse_number_list(*kv, "amplitudes");
    BellCoefficients c;
    if (values.size() == 4) {
      c = {values[0], values[1], values[2], values[3]};
    } else if (values.size() == 8) {
      c = {{values[0], values[1]}, {values[2], values[3]},
           {values[4], values[5]}, {values[6], values[7]}};
    } else {
      fail(kv->line, "key 'amplitudes': expected 4 reals or 8 re,im values, got " +
                         std::to_string(values.size()));
    }
    const double norm2 = std::norm(c.phi_plus) + std::norm(c.phi_minus) +
                         std::norm(c.psi_plus) + std::norm(c.psi_minus);
    if (norm2 <= kZeroProbTol) fail(kv->line, "key 'amplitudes': zero norm");
    const double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > 1e-6 && warnings) {
      warnings->push_back("amplitudes renormalized (input norm " + format_double(norm) + ")");
    }
    c.phi_plus /= norm;
    c.phi_minus /= norm;
    c.psi_plus /= norm;
    c.psi_minus /= norm;
    cfg.input_coefficients = c;
  }
  if (bell && !cfg.input_label && !cfg.input_coefficients) {
    cfg.input_label = BellLabel::PhiPlus;
  }

  if (const KeyedValue* kv = take("n")) {
    if (cfg.protocol != Protocol::GhzN) fail(kv->line, "key 'n' is only valid for ghz_n");
    const std::uint64_t n = parse_u64(*kv, "n");
    if (n < 2) fail(kv->line, "key 'n': ghz_n requires n >= 2");
    if (n > static_cast<std::uint64_t>(kMaxQubits)) {
      fail(kv->line, "key 'n': at most " + std::to_string(kMaxQubits) + " parties supported");
    }
    cfg.n = static_cast<int>(n);
  } else if (cfg.protocol == Protocol::GhzN) {
    fail(1, "protocol 'ghz_n' requires key 'n'");
  }

  if (const KeyedValue* kv = take("strategy")) {
    if (cfg.protocol != Protocol::GhzN) fail(kv->line, "key 'strategy' is only valid for ghz_n");
    static const std::map<std::string, GrowthStrategy> names = {
        {"sequential", GrowthStrategy::Sequential}, {"pair_merge", GrowthStrategy::PairMerge}};
    cfg.strategy = lookup(names, *kv, "strategy");
  } else if (cfg.protocol == Protocol::GhzN) {
    fail(1, "protocol 'ghz_n' requires key 'strategy'");
  }

  if (const KeyedValue* kv = take("m")) {
    if (cfg.protocol != Protocol::Ghz3 && cfg.protocol != Protocol::GhzN) {
      fail(kv->line, "key 'm' is only valid for ghz3/ghz_n");
    }
    const std::uint64_t m = parse_u64(*kv, "m");
    if (m < 1 || m > 64) fail(kv->line, "key 'm': check rounds must be in [1, 64]");
    cfg.max_rounds = static_cast<int>(m);
  }

  if (const KeyedValue* kv = take("trials")) cfg.trials = parse_u64(*kv, "trials");
  if (const KeyedValue* kv = take("seed")) cfg.seed = parse_u64(*kv, "seed");

  if (const KeyedValue* kv = take("force_swap")) {
    static const std::map<std::string, ForcedBranch> names = {
        {"random", ForcedBranch::Random}, {"on", ForcedBranch::On}, {"off", ForcedBranch::Off}};
    cfg.force_swap = lookup(names, *kv, "force_swap");
  }
  if (const KeyedValue* kv = take("force_parity")) {
    static const std::map<std::string, ForcedParity> names = {
        {"random", ForcedParity::Random},
        {"parallel", ForcedParity::Parallel},
        {"antiparallel", ForcedParity::Antiparallel}};
    cfg.force_parity = lookup(names, *kv, "force_parity");
  }
  if (const KeyedValue* kv = take("format")) {
    static const std::map<std::string, OutputFormat> names = {{"text", OutputFormat::Text},
                                                              {"csv", OutputFormat::Csv}};
    cfg.format = lookup(names, *kv, "format");
  }

  for (const auto& [key, kv] : entries) {
    if (!kv.used) fail(kv.line, "unknown key '" + key + "'");
  }
  return cfg;
}

std::string render_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "protocol = " << to_string(cfg.protocol) << "\n";
  if (cfg.input_label) out << "input = " << to_string(*cfg.input_label) << "\n";
  if (cfg.input_coefficients) {
    const BellCoefficients& c = *cfg.input_coefficients;
    out << "amplitudes = ";
    bool first = true;
    for (const Complex& z : {c.phi_plus, c.phi_minus, c.psi_plus, c.psi_minus}) {
      if (!first) out << ",";
      out << format_double(z.real()) << "," << format_double(z.imag());
      first = false;
    }
    out << "\n";
  }
  if (cfg.protocol == Protocol::GhzN) {
    out << "n = " << cfg.n << "\n";
    out << "strategy = " << to_string(cfg.strategy) << "\n";
  }
  if (cfg.protocol == Protocol::Ghz3 || cfg.protocol == Protocol::GhzN) {
    out << "m = " << cfg.max_rounds << "\n";
  }
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "force_swap = " << to_string(cfg.force_swap) << "\n";
  out << "force_parity = " << to_string(cfg.force_parity) << "\n";
  out << "format = " << to_string(cfg.format) << "\n";
  return out.str();
}

PureState scenario_input_state(const ScenarioConfig& cfg) {
  if (cfg.input_coefficients) return state_from_bell(*cfg.input_coefficients);
  if (cfg.input_label) return bell_state(*cfg.input_label);
  throw std::invalid_argument("scenario has no input state");
}

TrialOutcome run_scenario_once(const ScenarioConfig& cfg, OutcomeSource& source) {
  std::optional<bool> parity;
  if (cfg.force_parity == ForcedParity::Parallel) parity = true;
  if (cfg.force_parity == ForcedParity::Antiparallel) parity = false;
  std::optional<bool> swap;
  if (cfg.force_swap == ForcedBranch::On) swap = true;
  if (cfg.force_swap == ForcedBranch::Off) swap = false;
  OverrideSource src(source, parity, swap);

  switch (cfg.protocol) {
    case Protocol::BellQnd:
      return bell_trial(cfg, src, /*qnd=*/true);
    case Protocol::BellGen:
      return bell_trial(cfg, src, /*qnd=*/false);
    case Protocol::Ghz3: {
      DeviceState dev = make_ghz3_device();
      return ghz_trial(ghz3_prepare(cfg.max_rounds, dev, src));
    }
    case Protocol::GhzN:
      return ghz_trial(ghz_prepare({cfg.strategy, cfg.n, cfg.max_rounds}, src));
    case Protocol::Table1:
      break;
  }
  throw std::invalid_argument("table1 scenarios have no per-trial execution");
}

}  // namespace qdsim
