#pragma once

// Comparator regimes: simultaneous-move (Cournot) quantity competition with
// and without delegation, and the sequential market without delegation.

#include <string>
#include <vector>

#include "stackdel/delegation_stage.hpp"

namespace stackdel {

/// Cournot stage-1 equilibrium quantities for arbitrary incentive rates:
/// q_i = max{(a - n(c - a_i) + sum_{j != i}(c - a_j)) / (n + 1), 0}.
inline std::vector<Rational> cournot_quantities(const MarketParams& params, const IncentiveVector& incentives) {
  validate(params, incentives);
  const int n = params.n;
  std::vector<Rational> q(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    Rational num = params.a - n * (params.c - incentives.at_stage(i));
    for (int j = 1; j <= n; ++j)
      if (j != i) num += params.c - incentives.at_stage(j);
    Rational value = num / (n + 1);
    q[i - 1] = value > 0 ? value : Rational(0);
  }
  return q;
}

/// Manager i's Cournot best response to the rivals' quantities.
inline Rational cournot_manager_response(const MarketParams& params, const Rational& rate,
                                         const Rational& rivals_total) {
  Rational value = (params.margin() + rate - rivals_total) / 2;
  return value > 0 ? value : Rational(0);
}

/// Owner i's optimal rate in the Cournot delegation game given the sum of
/// the other owners' rates: (n - 1)(a - c - S) / (2n), floored at zero.
inline Rational cournot_owner_best_response(const MarketParams& params, const Rational& others_total) {
  const int n = params.n;
  Rational value = Rational(n - 1) * (params.margin() - others_total) / (2 * n);
  return value > 0 ? value : Rational(0);
}

/// Symmetric fixed point a = slope * (a - c - (n - 1) a) of the owners'
/// reaction map, solved as a scalar linear equation.
inline Rational cournot_symmetric_fixed_point(const MarketParams& params) {
  const int n = params.n;
  const Rational slope = Rational(n - 1, 2 * n);
  return slope * params.margin() / (1 + slope * (n - 1));
}

inline EquilibriumOutcome cournot_delegation(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  const Rational m = params.margin();
  const Rational denom = n * n + 1;
  const Rational rate = Rational(n - 1) * m / denom;

  ensure(rate == cournot_symmetric_fixed_point(params), "Cournot delegation rate vs symmetric fixed point");
  ensure(rate == cournot_owner_best_response(params, (n - 1) * rate), "Cournot owner best response");

  IncentiveVector incentives{std::vector<Rational>(static_cast<size_t>(n), rate)};
  std::vector<Rational> q = cournot_quantities(params, incentives);
  EquilibriumOutcome out = make_outcome(Regime::kCournotDelegation, params, std::move(incentives), q);

  for (int i = 1; i <= n; ++i) {
    ensure(out.profile.at_stage(i) == n * m / denom, "Cournot delegation quantity");
    ensure(out.owner_profits[i - 1] == n * m * m / (denom * denom), "Cournot delegation profit");
    ensure(out.profile.at_stage(i) == cournot_manager_response(params, rate, (n - 1) * out.profile.at_stage(i)),
           "Cournot stage-1 fixed point");
  }
  ensure(out.total_quantity == n * n * m / denom, "Cournot delegation total quantity");
  return out;
}

inline EquilibriumOutcome stackelberg_no_delegation(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  const Rational m = params.margin();
  std::vector<Rational> q;
  for (int i = 1; i <= n; ++i) q.push_back(m * pow2(-i));
  EquilibriumOutcome out = make_outcome(Regime::kStackelbergPlain, params, IncentiveVector::zeros(n), q);

  ensure(out.profile == solve_subgame_closed(params, out.incentives), "plain Stackelberg vs subgame solver");
  ensure(out.total_quantity == m * (1 - pow2(-n)), "plain Stackelberg total quantity");
  for (int i = 1; i <= n; ++i)
    ensure(out.owner_profits[i - 1] == pow2(-i) * m * m / pow2(n), "plain Stackelberg profit");
  return out;
}

inline EquilibriumOutcome cournot_no_delegation(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  const Rational m = params.margin();
  IncentiveVector zero = IncentiveVector::zeros(n);
  std::vector<Rational> q = cournot_quantities(params, zero);
  EquilibriumOutcome out = make_outcome(Regime::kCournotPlain, params, std::move(zero), q);
  for (int i = 1; i <= n; ++i) {
    ensure(out.profile.at_stage(i) == m / (n + 1), "plain Cournot quantity");
    ensure(out.owner_profits[i - 1] == m * m / ((n + 1) * (n + 1)), "plain Cournot profit");
  }
  return out;
}

inline EquilibriumOutcome solve_regime(const MarketParams& params, Regime regime) {
  switch (regime) {
    case Regime::kStackelbergDelegation: return solve_spne(params);
    case Regime::kCournotDelegation: return cournot_delegation(params);
    case Regime::kStackelbergPlain: return stackelberg_no_delegation(params);
    case Regime::kCournotPlain: return cournot_no_delegation(params);
  }
  fail(ErrorCode::kUsage, "unknown regime");
}

}  // namespace stackdel
