#pragma once

// JSON and CSV rendering of solver results. Rationals travel as "p/q"
// strings in JSON; CSV carries the fraction and, optionally, a decimal
// companion column suffixed "_dec".

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stackdel/analysis.hpp"
#include "stackdel/oracle.hpp"

namespace stackdel {

using Json = nlohmann::ordered_json;

enum class RationalStyle { kFraction, kDecimal, kBoth };
enum class OutputFormat { kCsv, kJson };

inline std::string_view to_string(RationalStyle s) {
  switch (s) {
    case RationalStyle::kFraction: return "fraction";
    case RationalStyle::kDecimal: return "decimal";
    case RationalStyle::kBoth: return "both";
  }
  return "unknown";
}

inline RationalStyle parse_rational_style(std::string_view text) {
  for (RationalStyle s : {RationalStyle::kFraction, RationalStyle::kDecimal, RationalStyle::kBoth})
    if (to_string(s) == text) return s;
  fail(ErrorCode::kUsage, "unknown rational style '" + std::string(text) + "'");
}

inline std::string_view to_string(OutputFormat f) { return f == OutputFormat::kCsv ? "csv" : "json"; }

inline OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  fail(ErrorCode::kUsage, "unknown format '" + std::string(text) + "'");
}

/// Fixed rendering for floating diagnostics so output stays byte-stable.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

// ---------------------------------------------------------------- JSON

/// "p/q" for fraction style, a decimal string for decimal style and an
/// object {"exact", "decimal"} for both.
inline Json rational_to_json(const Rational& r, RationalStyle style) {
  switch (style) {
    case RationalStyle::kFraction: return to_fraction(r);
    case RationalStyle::kDecimal: return to_decimal(r);
    case RationalStyle::kBoth: return Json{{"exact", to_fraction(r)}, {"decimal", to_decimal(r)}};
  }
  return nullptr;
}

/// Accepts every rendering produced by rational_to_json plus bare integers.
/// Decimal-only renderings parse to their written value, not the original.
inline Rational rational_from_json(const Json& j) {
  if (j.is_object()) return rational_from_json(j.at("exact"));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  fail(ErrorCode::kUsage, "expected a rational, got " + j.dump());
}

inline Json rationals_to_json(const std::vector<Rational>& values, RationalStyle style) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(rational_to_json(v, style));
  return arr;
}

inline std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::kUsage, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

inline Json params_to_json(const MarketParams& p, RationalStyle style) {
  return Json{{"n", p.n}, {"a", rational_to_json(p.a, style)}, {"c", rational_to_json(p.c, style)}};
}

inline MarketParams params_from_json(const Json& j) {
  MarketParams p;
  if (j.contains("n")) p.n = j.at("n").get<int>();
  if (j.contains("a")) p.a = rational_from_json(j.at("a"));
  if (j.contains("c")) p.c = rational_from_json(j.at("c"));
  return p;
}

inline Json outcome_to_json(const EquilibriumOutcome& o, RationalStyle style) {
  return Json{{"regime", std::string(to_string(o.regime))},
              {"params", params_to_json(o.params, style)},
              {"incentives", rationals_to_json(o.incentives.rates, style)},
              {"quantities", rationals_to_json(o.profile.quantities, style)},
              {"price", rational_to_json(o.profile.price, style)},
              {"interior", o.profile.interior},
              {"profits", rationals_to_json(o.owner_profits, style)},
              {"total_quantity", rational_to_json(o.total_quantity, style)}};
}

inline EquilibriumOutcome outcome_from_json(const Json& j) {
  try {
    EquilibriumOutcome o;
    o.regime = parse_regime(j.at("regime").get<std::string>());
    o.params = params_from_json(j.at("params"));
    o.incentives.rates = rationals_from_json(j.at("incentives"));
    o.profile.quantities = rationals_from_json(j.at("quantities"));
    o.profile.price = rational_from_json(j.at("price"));
    o.profile.interior = j.at("interior").get<bool>();
    o.owner_profits = rationals_from_json(j.at("profits"));
    o.total_quantity = rational_from_json(j.at("total_quantity"));
    return o;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUsage, std::string("malformed outcome JSON: ") + e.what());
  }
}

inline Json flags_to_json(const std::vector<bool>& flags) {
  Json arr = Json::array();
  for (bool f : flags) arr.push_back(f);
  return arr;
}

inline Json threshold_to_json(const ThresholdEvidence& ev, RationalStyle style) {
  return Json{{"n", ev.n},
              {"threshold", ev.stage},
              {"r_lower", rational_to_json(ev.r_lower, style)},
              {"bound", rational_to_json(ev.bound, style)},
              {"r_upper", rational_to_json(ev.r_upper, style)},
              {"tie", ev.tie}};
}

inline Json comparison_to_json(const ComparisonReport& r, RationalStyle style) {
  Json j{{"n", r.n},
         {"params", params_to_json(r.params, style)},
         {"stackelberg_delegation", outcome_to_json(r.stackelberg, style)},
         {"cournot_delegation", outcome_to_json(r.cournot, style)},
         {"stackelberg_plain", outcome_to_json(r.stackelberg_plain, style)},
         {"cournot_plain", outcome_to_json(r.cournot_plain, style)},
         {"profit_ordering_holds", r.profit_ordering_holds},
         {"quantity_ordering_holds", r.quantity_ordering_holds},
         {"incentive_ordering_holds", r.incentive_ordering_holds},
         {"threshold", r.threshold_stage},
         {"direct_threshold", r.direct_threshold_stage},
         {"threshold_monotone", r.threshold_monotone},
         {"threshold_tie", r.threshold_tie},
         {"quantity_gap", rational_to_json(r.quantity_gap, style)},
         {"incentive_window_holds", r.incentive_window_holds},
         {"incentive_above_cournot", flags_to_json(r.incentive_flags)},
         {"profit_above_cournot", flags_to_json(r.profit_flags)},
         {"cournot_profit_claim_holds", r.cournot_profit_claim_holds},
         {"prefers_delegation", flags_to_json(r.regime_preference)},
         {"cournot_prefers_no_delegation", r.cournot_prefers_no_delegation}};
  j["duopoly_pattern"] = r.duopoly_pattern ? Json(*r.duopoly_pattern) : Json(nullptr);
  return j;
}

inline Json certificate_to_json(const StageCertificate& c) {
  return Json{{"stage", c.stage},
              {"analytic", c.analytic},
              {"oracle", c.oracle},
              {"deviation", c.deviation},
              {"gain", c.gain}};
}

inline Json verification_to_json(const VerificationReport& r, RationalStyle style) {
  Json quantity = Json::array();
  Json delegation = Json::array();
  for (const auto& c : r.quantity) quantity.push_back(certificate_to_json(c));
  for (const auto& c : r.delegation) delegation.push_back(certificate_to_json(c));
  return Json{{"params", params_to_json(r.params, style)},
              {"backward_induction_quantities", r.backward_induction.quantities},
              {"backward_induction_deviation", r.backward_induction_deviation},
              {"quantity_certificates", quantity},
              {"delegation_certificates", delegation},
              {"max_deviation", r.max_deviation},
              {"max_gain", r.max_gain},
              {"passed", r.passed}};
}

// ----------------------------------------------------------------- CSV

/// Row builder that expands rational cells according to the style.
class CsvTable {
 public:
  struct Column {
    std::string name;
    bool rational = false;
  };

  CsvTable(std::vector<Column> columns, RationalStyle style) : columns_(std::move(columns)), style_(style) {}

  void begin_row() { rows_.emplace_back(); }
  void add(std::string text) { rows_.back().push_back(std::move(text)); }
  void add(int value) { add(std::to_string(value)); }
  void add(bool value) { add(std::string(value ? "true" : "false")); }
  void add(const char* text) { add(std::string(text)); }
  void add(const Rational& r) {
    switch (style_) {
      case RationalStyle::kFraction: add(to_fraction(r)); break;
      case RationalStyle::kDecimal: add(to_decimal(r)); break;
      case RationalStyle::kBoth:
        add(to_fraction(r));
        add(to_decimal(r));
        break;
    }
  }

  void write(std::ostream& out) const {
    bool first = true;
    for (const auto& col : columns_) {
      out << (first ? "" : ",") << col.name;
      if (col.rational && style_ == RationalStyle::kBoth) out << "," << col.name << "_dec";
      first = false;
    }
    out << "\n";
    for (const auto& row : rows_) {
      for (size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
      out << "\n";
    }
  }

 private:
  std::vector<Column> columns_;
  RationalStyle style_;
  std::vector<std::vector<std::string>> rows_;
};

inline CsvTable outcome_table(const std::vector<EquilibriumOutcome>& outcomes, RationalStyle style) {
  CsvTable t({{"regime"}, {"n"}, {"i"}, {"a_i", true}, {"q_i", true}, {"u_i", true}, {"price", true}, {"Q", true}},
             style);
  for (const auto& o : outcomes)
    for (int i = 1; i <= o.params.n; ++i) {
      t.begin_row();
      t.add(std::string(to_string(o.regime)));
      t.add(o.params.n);
      t.add(i);
      t.add(o.incentives.at_stage(i));
      t.add(o.profile.at_stage(i));
      t.add(o.owner_profits[i - 1]);
      t.add(o.profile.price);
      t.add(o.total_quantity);
    }
  return t;
}

/// One row per (n, stage) with the columns used for sweeps.
inline CsvTable comparison_table(const std::vector<ComparisonReport>& reports, RationalStyle style) {
  CsvTable t({{"n"},
              {"i"},
              {"a_i", true},
              {"q_i", true},
              {"u_i", true},
              {"u_bar_i", true},
              {"prefers_delegation"},
              {"a_C", true},
              {"u_C", true},
              {"Q_S", true},
              {"Q_C", true},
              {"threshold"}},
             style);
  for (const auto& r : reports)
    for (int i = 1; i <= r.n; ++i) {
      t.begin_row();
      t.add(r.n);
      t.add(i);
      t.add(r.stackelberg.incentives.at_stage(i));
      t.add(r.stackelberg.profile.at_stage(i));
      t.add(r.stackelberg.owner_profits[i - 1]);
      t.add(r.stackelberg_plain.owner_profits[i - 1]);
      t.add(static_cast<bool>(r.regime_preference[i - 1]));
      t.add(r.cournot.incentives.rates.front());
      t.add(r.cournot.owner_profits.front());
      t.add(r.stackelberg.total_quantity);
      t.add(r.cournot.total_quantity);
      t.add(r.threshold_stage);
    }
  return t;
}

inline CsvTable threshold_table(const std::vector<ThresholdEvidence>& rows, RationalStyle style) {
  CsvTable t({{"n"}, {"threshold"}, {"r_lower", true}, {"bound", true}, {"r_upper", true}, {"tie"}}, style);
  for (const auto& ev : rows) {
    t.begin_row();
    t.add(ev.n);
    t.add(ev.stage);
    t.add(ev.r_lower);
    t.add(ev.bound);
    t.add(ev.r_upper);
    t.add(ev.tie);
  }
  return t;
}

inline CsvTable verification_table(const std::vector<VerificationReport>& reports) {
  CsvTable t({{"n"}, {"check"}, {"stage"}, {"analytic"}, {"oracle"}, {"deviation"}, {"gain"}, {"passed"}},
             RationalStyle::kFraction);
  for (const auto& r : reports) {
    auto row = [&](const char* check, const StageCertificate& c) {
      t.begin_row();
      t.add(r.params.n);
      t.add(check);
      t.add(c.stage);
      t.add(format_double(c.analytic));
      t.add(format_double(c.oracle));
      t.add(format_double(c.deviation));
      t.add(format_double(c.gain));
      t.add(c.deviation < kDeviationTolerance && c.gain < kGainTolerance);
    };
    t.begin_row();
    t.add(r.params.n);
    t.add("backward-induction");
    t.add(0);
    t.add("");
    t.add("");
    t.add(format_double(r.backward_induction_deviation));
    t.add("");
    t.add(r.backward_induction_deviation < kDeviationTolerance);
    for (const auto& c : r.quantity) row("quantity", c);
    for (const auto& c : r.delegation) row("delegation", c);
    t.begin_row();
    t.add(r.params.n);
    t.add("summary");
    t.add(0);
    t.add("");
    t.add("");
    t.add(format_double(r.max_deviation));
    t.add(format_double(r.max_gain));
    t.add(r.passed);
  }
  return t;
}

}  // namespace stackdel
