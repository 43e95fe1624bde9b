#pragma once

// Command-line front end. Configuration comes from flags and an optional
// JSON file whose keys mirror RunConfig; flags win over the file.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stackdel/io.hpp"

namespace stackdel {

enum class Command { kSolve, kCompare, kThreshold, kSweep, kVerify };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::kSolve: return "solve";
    case Command::kCompare: return "compare";
    case Command::kThreshold: return "threshold";
    case Command::kSweep: return "sweep";
    case Command::kVerify: return "verify";
  }
  return "unknown";
}

inline Command parse_command(std::string_view text) {
  for (Command c : {Command::kSolve, Command::kCompare, Command::kThreshold, Command::kSweep, Command::kVerify})
    if (to_string(c) == text) return c;
  fail(ErrorCode::kUsage, "unknown command '" + std::string(text) + "'");
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitModelError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerificationFailed = 3;

struct RunConfig {
  Command command = Command::kSolve;
  MarketParams params;
  bool n_given = false;
  std::optional<Regime> regime;
  std::optional<std::pair<int, int>> n_range;
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::string> output_path;
  std::optional<RationalStyle> rational_style;  // unset: fraction for JSON, both for CSV
  bool include_n4 = false;

  RationalStyle effective_style() const {
    if (rational_style) return *rational_style;
    return format == OutputFormat::kCsv ? RationalStyle::kBoth : RationalStyle::kFraction;
  }
};

/// Rejects configs whose fields do not fit the command.
inline void check_config(const RunConfig& cfg) {
  const bool needs_n = cfg.command == Command::kSolve || cfg.command == Command::kCompare ||
                       cfg.command == Command::kThreshold;
  if (needs_n && !cfg.n_given) fail(ErrorCode::kUsage, std::string(to_string(cfg.command)) + " requires --n");
  if (cfg.command == Command::kSolve && !cfg.regime) fail(ErrorCode::kUsage, "solve requires --regime");
  if (cfg.command != Command::kSolve && cfg.regime) fail(ErrorCode::kUsage, "--regime applies to solve only");
  if (cfg.command == Command::kSweep && !cfg.n_range) fail(ErrorCode::kUsage, "sweep requires --n-range");
  if (cfg.command != Command::kSweep && cfg.n_range) fail(ErrorCode::kUsage, "--n-range applies to sweep only");
  if (cfg.n_range && cfg.n_range->first > cfg.n_range->second)
    fail(ErrorCode::kUsage, "--n-range lower end exceeds upper end");
  if (cfg.command != Command::kVerify && cfg.include_n4)
    fail(ErrorCode::kUsage, "--include-n4 applies to verify only");
}

/// Reads a JSON config file into `cfg`; keys absent from the file are left alone.
inline void apply_config_json(const Json& j, RunConfig& cfg) {
  try {
    if (!j.is_object()) fail(ErrorCode::kUsage, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "command") {
        cfg.command = parse_command(value.get<std::string>());
      } else if (key == "params") {
        if (!value.is_object()) fail(ErrorCode::kUsage, "config params must be an object");
        if (value.contains("n")) cfg.n_given = true;
        const MarketParams p = params_from_json(value);
        if (value.contains("n")) cfg.params.n = p.n;
        if (value.contains("a")) cfg.params.a = p.a;
        if (value.contains("c")) cfg.params.c = p.c;
      } else if (key == "regime") {
        cfg.regime = parse_regime(value.get<std::string>());
      } else if (key == "n_range") {
        if (!value.is_array() || value.size() != 2) fail(ErrorCode::kUsage, "n_range must be [lower, upper]");
        cfg.n_range = std::pair{value[0].get<int>(), value[1].get<int>()};
      } else if (key == "format") {
        cfg.format = parse_format(value.get<std::string>());
      } else if (key == "output_path") {
        cfg.output_path = value.get<std::string>();
      } else if (key == "rational_style") {
        cfg.rational_style = parse_rational_style(value.get<std::string>());
      } else if (key == "include_n4") {
        cfg.include_n4 = value.get<bool>();
      } else {
        fail(ErrorCode::kUsage, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUsage, std::string("malformed config: ") + e.what());
  }
}

inline Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kUsage, "cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUsage, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return j;
}

/// Result of command-line parsing: either a config to run or an early exit
/// (help text, parse error) with its message.
struct ParsedArgs {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
  std::string message;
};

inline ParsedArgs parse_arguments(const std::vector<std::string>& args) {
  CLI::App app{"Sequential oligopoly with strategic delegation: exact equilibria and regime comparisons"};
  app.set_help_all_flag("--help-all");
  app.require_subcommand(0, 1);

  std::string config_path, n_text, a_text, c_text, regime_text, format_text, style_text, output_path;
  std::vector<int> n_range;
  bool include_n4 = false;

  auto* o_config = app.add_option("--config", config_path, "JSON config file (keys mirror RunConfig)");
  auto* o_n = app.add_option("--n", n_text, "number of firms, 2..64");
  auto* o_a = app.add_option("--a", a_text, "demand intercept (integer, p/q or decimal)");
  auto* o_c = app.add_option("--c", c_text, "marginal cost (integer, p/q or decimal)");
  auto* o_regime = app.add_option("--regime", regime_text,
                                  "stackelberg-delegation|cournot-delegation|stackelberg-plain|cournot-plain");
  auto* o_range = app.add_option("--n-range", n_range, "inclusive range of n for sweep")->expected(2);
  auto* o_format = app.add_option("--format", format_text, "csv|json");
  auto* o_output = app.add_option("--output", output_path, "write to this file instead of stdout");
  auto* o_style = app.add_option("--rational-style", style_text, "fraction|decimal|both");
  auto* o_n4 = app.add_flag("--include-n4", include_n4, "verify: also run n = 4");

  std::vector<CLI::App*> subs;
  for (Command c : {Command::kSolve, Command::kCompare, Command::kThreshold, Command::kSweep, Command::kVerify}) {
    auto* sub = app.add_subcommand(std::string(to_string(c)));
    sub->fallthrough();
    subs.push_back(sub);
  }
  subs[0]->description("equilibrium of one regime");
  subs[1]->description("all four regimes and their orderings at one n");
  subs[2]->description("delegation threshold stage with its bracket");
  subs[3]->description("comparison rows for every n in a range");
  subs[4]->description("grid-search certificates of the equilibrium at n = 2, 3 (and 4)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, kExitOk, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return {std::nullopt, kExitOk, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, kExitUsage, std::string("USAGE: ") + e.what()};
  }

  try {
    RunConfig cfg;
    bool command_given = false;
    if (o_config->count()) {
      const Json file = read_config_file(config_path);
      apply_config_json(file, cfg);
      command_given = file.contains("command");
    }
    for (size_t k = 0; k < subs.size(); ++k)
      if (subs[k]->parsed()) {
        cfg.command = static_cast<Command>(k);
        command_given = true;
      }
    if (!command_given) fail(ErrorCode::kUsage, "a command is required");
    if (o_n->count()) {
      try {
        cfg.params.n = std::stoi(n_text);
      } catch (const std::exception&) {
        fail(ErrorCode::kUsage, "--n expects an integer, got '" + n_text + "'");
      }
      cfg.n_given = true;
    }
    if (o_a->count()) cfg.params.a = parse_rational(a_text);
    if (o_c->count()) cfg.params.c = parse_rational(c_text);
    if (o_regime->count()) cfg.regime = parse_regime(regime_text);
    if (o_range->count()) cfg.n_range = std::pair{n_range.at(0), n_range.at(1)};
    if (o_format->count()) cfg.format = parse_format(format_text);
    if (o_output->count()) cfg.output_path = output_path;
    if (o_style->count()) cfg.rational_style = parse_rational_style(style_text);
    if (o_n4->count()) cfg.include_n4 = include_n4;
    check_config(cfg);
    return {cfg, kExitOk, {}};
  } catch (const ModelError& e) {
    return {std::nullopt, kExitUsage, e.what()};
  }
}

/// Runs a command, writing the artifact to `out` (or the configured file).
/// Returns the process exit status; errors are reported on `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    const RationalStyle style = cfg.effective_style();
    const bool csv = cfg.format == OutputFormat::kCsv;
    std::ostringstream buf;
    int status = kExitOk;

    switch (cfg.command) {
      case Command::kSolve: {
        const EquilibriumOutcome o = solve_regime(cfg.params, *cfg.regime);
        if (csv) outcome_table({o}, style).write(buf);
        else buf << outcome_to_json(o, style).dump(2) << "\n";
        break;
      }
      case Command::kCompare: {
        const ComparisonReport r = compare_regimes(cfg.params);
        if (csv) comparison_table({r}, style).write(buf);
        else buf << comparison_to_json(r, style).dump(2) << "\n";
        break;
      }
      case Command::kThreshold: {
        const ThresholdEvidence ev = threshold_evidence(cfg.params.n);
        if (csv) threshold_table({ev}, style).write(buf);
        else buf << threshold_to_json(ev, style).dump(2) << "\n";
        break;
      }
      case Command::kSweep: {
        std::vector<ComparisonReport> reports;
        for (int n = cfg.n_range->first; n <= cfg.n_range->second; ++n) {
          MarketParams p = cfg.params;
          p.n = n;
          reports.push_back(compare_regimes(p));
        }
        if (csv) {
          comparison_table(reports, style).write(buf);
        } else {
          Json arr = Json::array();
          for (const auto& r : reports) arr.push_back(comparison_to_json(r, style));
          buf << Json{{"reports", arr}}.dump(2) << "\n";
        }
        break;
      }
      case Command::kVerify: {
        std::vector<VerificationReport> reports;
        bool passed = true;
        std::vector<int> sizes{2, 3};
        if (cfg.include_n4) sizes.push_back(4);
        for (int n : sizes) {
          MarketParams p = cfg.params;
          p.n = n;
          reports.push_back(verify_equilibrium(p));
          passed = passed && reports.back().passed;
        }
        if (csv) {
          verification_table(reports).write(buf);
        } else {
          Json arr = Json::array();
          for (const auto& r : reports) arr.push_back(verification_to_json(r, style));
          buf << Json{{"reports", arr}, {"passed", passed}}.dump(2) << "\n";
        }
        if (!passed) {
          err << "verification failed: a grid deviation or gain exceeds its tolerance\n";
          status = kExitVerificationFailed;
        }
        break;
      }
    }

    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path, std::ios::binary);
      if (!file) fail(ErrorCode::kUsage, "cannot write '" + *cfg.output_path + "'");
      file << buf.str();
    } else {
      out << buf.str();
    }
    return status;
  } catch (const ModelError& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? kExitUsage : kExitModelError;
  }
}

/// Full entry point: argv (without the program name) to exit status.
inline int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParsedArgs parsed = parse_arguments(args);
  if (!parsed.config) {
    (parsed.exit_code == kExitOk ? out : err) << parsed.message << (parsed.message.ends_with('\n') ? "" : "\n");
    return parsed.exit_code;
  }
  return run(*parsed.config, out, err);
}

}  // namespace stackdel
