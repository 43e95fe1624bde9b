#pragma once

// Comparative results across regimes. Every claim is evaluated twice: once
// by a closed-form predicate and once by comparing computed equilibrium
// values; disagreement raises INCONSISTENT.

#include <optional>
#include <string>
#include <vector>

#include "stackdel/benchmarks.hpp"

namespace stackdel {

/// r(i) = 2^{2+i}.
inline Rational stage_ratio(int i) { return pow2(2 + i); }

struct ThresholdEvidence {
  int n = 0;
  int stage = 0;       // i'(n)
  Rational bound;      // 4 + h(n)^2
  Rational r_lower;    // r(i')
  Rational r_upper;    // r(i' + 1)
  bool tie = false;    // r(i') == bound
};

/// Locates i'(n) with r(i') <= 4 + h(n)^2 < r(i' + 1) after checking that
/// r(1) < 4 + h(n)^2 < r(n).
inline ThresholdEvidence threshold_evidence(int n) {
  if (n < kMinFirms) fail(ErrorCode::kBadN, "threshold needs n >= 2");
  check_firm_count(n);
  const Rational h = h_closed(n);
  ThresholdEvidence ev{n, 0, 4 + h * h, 0, 0, false};
  if (!(stage_ratio(1) < ev.bound && ev.bound < stage_ratio(n)))
    fail(ErrorCode::kThresholdBracket, "r(1) < 4 + h^2 < r(n) fails at n=" + std::to_string(n));
  for (int i = 1; i < n; ++i)
    if (stage_ratio(i) <= ev.bound) ev.stage = i;
  ev.r_lower = stage_ratio(ev.stage);
  ev.r_upper = stage_ratio(ev.stage + 1);
  ev.tie = ev.r_lower == ev.bound;
  return ev;
}

inline int delegation_threshold(int n) { return threshold_evidence(n).stage; }

struct ComparisonReport {
  int n = 0;
  MarketParams params;
  EquilibriumOutcome stackelberg;        // sequential, with delegation
  EquilibriumOutcome cournot;            // simultaneous, with delegation
  EquilibriumOutcome stackelberg_plain;  // sequential, no delegation
  EquilibriumOutcome cournot_plain;      // simultaneous, no delegation

  bool profit_ordering_holds = false;    // u_n > ... > u_1
  bool quantity_ordering_holds = false;  // q_n > ... > q_1
  bool incentive_ordering_holds = false; // a_n > ... > a_1 = 0

  int threshold_stage = 0;         // from the r(i) predicate
  int direct_threshold_stage = 0;  // largest i with u_i <= u_bar_i
  bool threshold_monotone = false; // u_i > u_bar_i exactly for i above it
  bool threshold_tie = false;      // some u_i == u_bar_i

  Rational quantity_gap;           // Q_S - Q_C
  bool incentive_window_holds = false;
  std::vector<bool> incentive_flags;    // a_i > a_C
  std::vector<bool> profit_flags;       // u_i > u_C
  std::optional<bool> duopoly_pattern;  // n == 2: u_2 > u_C > u_1
  bool cournot_profit_claim_holds = false;
  std::vector<bool> regime_preference;  // u_i > u_bar_i
  bool cournot_prefers_no_delegation = false;
};

inline ComparisonReport compare_regimes(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  ComparisonReport rep;
  rep.n = n;
  rep.params = params;
  rep.stackelberg = solve_spne(params);
  rep.cournot = cournot_delegation(params);
  rep.stackelberg_plain = stackelberg_no_delegation(params);
  rep.cournot_plain = cournot_no_delegation(params);

  const auto& a = rep.stackelberg.incentives.rates;
  const auto& q = rep.stackelberg.profile.quantities;
  const auto& u = rep.stackelberg.owner_profits;
  const auto& u_bar = rep.stackelberg_plain.owner_profits;
  const Rational& a_c = rep.cournot.incentives.rates.front();
  const Rational& u_c = rep.cournot.owner_profits.front();
  const Rational h = h_closed(n);
  const Rational n2p1 = n * n + 1;

  rep.profit_ordering_holds = rep.quantity_ordering_holds = true;
  rep.incentive_ordering_holds = a.front() == 0;
  for (int i = 1; i < n; ++i) {
    rep.profit_ordering_holds = rep.profit_ordering_holds && u[i] > u[i - 1];
    rep.quantity_ordering_holds = rep.quantity_ordering_holds && q[i] > q[i - 1];
    rep.incentive_ordering_holds = rep.incentive_ordering_holds && a[i] > a[i - 1];
  }

  // Delegation vs no delegation in the sequential market.
  const ThresholdEvidence ev = threshold_evidence(n);
  rep.threshold_stage = ev.stage;
  rep.threshold_tie = ev.tie;
  for (int i = 1; i <= n; ++i) {
    const bool prefers = u[i - 1] > u_bar[i - 1];
    rep.regime_preference.push_back(prefers);
    if (u[i - 1] == u_bar[i - 1]) rep.threshold_tie = true;
    ensure(prefers == (stage_ratio(i) > ev.bound), "delegation preference predicate, stage " + std::to_string(i));
    if (!prefers) rep.direct_threshold_stage = i;
  }
  rep.threshold_monotone = true;
  for (int i = rep.direct_threshold_stage + 1; i <= n; ++i)
    rep.threshold_monotone = rep.threshold_monotone && rep.regime_preference[i - 1];
  for (int i = 1; i <= rep.direct_threshold_stage; ++i)
    rep.threshold_monotone = rep.threshold_monotone && !rep.regime_preference[i - 1];
  ensure(rep.threshold_stage == rep.direct_threshold_stage, "threshold predicate vs direct profit comparison");

  // Total output.
  rep.quantity_gap = rep.stackelberg.total_quantity - rep.cournot.total_quantity;
  const Integer qty_predicate = Integer(n - 1) * (Integer(1) << (n + 1)) + 2 - 2 * Integer(n) * n;
  ensure((rep.quantity_gap > 0) == (qty_predicate > 0), "total quantity predicate");

  // Incentive rates vs the Cournot rate.
  const Rational window = 4 + Rational(n - 1) * pow2(n) * h / n2p1;
  rep.incentive_window_holds = pow2(n) < window && window < pow2(n + 1);
  for (int i = 1; i <= n; ++i) {
    const bool above = a[i - 1] > a_c;
    rep.incentive_flags.push_back(above);
    ensure(above == (pow2(i + 1) > window), "incentive predicate, stage " + std::to_string(i));
  }

  // Profits vs the Cournot profit.
  const Rational y = n * pow2(n) * h * h / (n2p1 * n2p1);
  for (int i = 1; i <= n; ++i) {
    const bool above = u[i - 1] > u_c;
    rep.profit_flags.push_back(above);
    ensure(above == (4 - pow2(2 - i) > y), "profit predicate, stage " + std::to_string(i));
  }
  if (n == 2) {
    rep.duopoly_pattern = u[1] > u_c && u_c > u[0];
    rep.cournot_profit_claim_holds = *rep.duopoly_pattern;
  } else {
    rep.cournot_profit_claim_holds = true;
    for (bool f : rep.profit_flags) rep.cournot_profit_claim_holds = rep.cournot_profit_claim_holds && !f;
  }
  rep.cournot_prefers_no_delegation = u_c < rep.cournot_plain.owner_profits.front();
  return rep;
}

}  // namespace stackdel
