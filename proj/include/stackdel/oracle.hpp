#pragma once

// Brute-force verification in double precision. Backward induction over a
// quantity grid with q >= 0, grid search over owners' incentive rates, and
// finite-difference checks of the owners' derivative. Independent of the
// affine reaction engine; only desk-scale n (<= 4).
//
// Managers price output with the linear rule a - Q by default. Under the
// clamped rule max{a - Q, 0} a manager with a_i > 0 still earns a_i per unit
// once the price hits zero, so its objective grows without bound and the
// grid's upper edge becomes the "best response"; PriceRule::kClamped is kept
// to exhibit that.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stackdel/delegation_stage.hpp"

namespace stackdel {

inline constexpr int kMaxOracleFirms = 4;
inline constexpr double kMaxBracket = 1e-6;
inline constexpr double kZoomFactor = 10.0;

enum class PriceRule { kLinear, kClamped };

struct GridSpec {
  double lower = 0.0;
  double upper = 1.0;
  int steps = 2001;
  int refinement_rounds = 4;

  void validate() const {
    if (!(lower >= 0.0) || !(upper > lower) || steps < 3 || refinement_rounds < 0)
      fail(ErrorCode::kInvalidGrid, "grid needs 0 <= lower < upper, steps >= 3, rounds >= 0");
  }
  // Grid spacing in the last refinement round.
  double final_spacing() const {
    return (upper - lower) / std::pow(kZoomFactor, refinement_rounds) / (steps - 1);
  }
  // Width of the interval known to contain the argmax after refinement.
  double bracket() const { return 2.0 * final_spacing(); }
};

/// Adds refinement rounds until the final bracket is below kMaxBracket.
inline GridSpec with_enough_rounds(GridSpec grid) {
  while (grid.bracket() >= kMaxBracket) ++grid.refinement_rounds;
  return grid;
}

/// [0, a - c] with 2001 points and 4 rounds at n = 2; coarser per-stage
/// grids for n = 3, 4 keep full backward induction tractable. Wide
/// intervals get extra rounds.
inline GridSpec default_grid(const MarketParams& params) {
  const double upper = to_double(params.margin());
  switch (params.n) {
    case 2: return with_enough_rounds({0.0, upper, 2001, 4});
    case 3: return with_enough_rounds({0.0, upper, 41, 5});
    default: return with_enough_rounds({0.0, upper, 21, 6});
  }
}

/// Coarse grid for quantity subgames reached off the interior branch while
/// searching over incentive rates.
inline GridSpec fallback_grid(const MarketParams& params) {
  return {0.0, to_double(params.margin()), 11, 2};
}

inline void check_grid(const GridSpec& grid) {
  grid.validate();
  if (grid.bracket() >= kMaxBracket)
    fail(ErrorCode::kGridTooCoarse, "refinement leaves a bracket of " + std::to_string(grid.bracket()));
}

namespace detail {

struct GridBest {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Zooming grid search. `score(x)` is evaluated on `steps` evenly spaced
// points, then on a window 10x narrower centered on the incumbent, for
// every refinement round. Ties go to the smaller x.
template <class Score>
GridBest refine_argmax(const GridSpec& grid, Score&& score) {
  GridBest best;
  double lo = grid.lower;
  double hi = grid.upper;
  for (int round = 0; round <= grid.refinement_rounds; ++round) {
    const double spacing = (hi - lo) / (grid.steps - 1);
    for (int k = 0; k < grid.steps; ++k) {
      const double x = k + 1 == grid.steps ? hi : lo + k * spacing;
      const double v = score(x);
      if (v > best.value || (v == best.value && x < best.x)) best = {x, v};
    }
    const double width = (hi - lo) / kZoomFactor;
    lo = best.x - width / 2;
    hi = best.x + width / 2;
    if (lo < grid.lower) {
      hi += grid.lower - lo;
      lo = grid.lower;
    }
    if (hi > grid.upper) {
      lo -= hi - grid.upper;
      hi = grid.upper;
    }
  }
  return best;
}

// Three-point quadratic fit around the grid optimum at the round-1 spacing.
// Grid argmax locations are ill-conditioned near flat optima and their
// errors compound through nested stages; the fitted vertex is exact for
// locally quadratic objectives. Kept only if it stays inside the fit
// bracket and does not lower the score by more than inner-stage noise.
template <class Score>
GridBest polish_vertex(const GridSpec& grid, const GridBest& best, Score&& score) {
  const double h = (grid.upper - grid.lower) / (grid.steps - 1) / kZoomFactor;
  if (best.x - h < grid.lower || best.x + h > grid.upper) return best;
  const double left = score(best.x - h);
  const double right = score(best.x + h);
  const double bend = left - 2 * best.value + right;
  if (!(bend < 0)) return best;
  const double x = best.x + 0.5 * h * (left - right) / bend;
  if (!(std::abs(x - best.x) <= h)) return best;
  const double v = score(x);
  if (v >= best.value - 1e-10 * std::abs(best.value)) return {x, v};
  return best;
}

template <class Score>
GridBest grid_argmax(const GridSpec& grid, Score&& score) {
  return polish_vertex(grid, refine_argmax(grid, score), score);
}

using Choices = std::array<double, kMaxOracleFirms>;

class SubgameOracle {
 public:
  SubgameOracle(const MarketParams& params, std::vector<double> rates, GridSpec grid,
                PriceRule rule = PriceRule::kLinear)
      : n_(params.n),
        a_(to_double(params.a)),
        c_(to_double(params.c)),
        rates_(std::move(rates)),
        grid_(grid),
        rule_(rule) {}

  int n() const { return n_; }

  double price(double total) const { return rule_ == PriceRule::kClamped ? std::max(a_ - total, 0.0) : a_ - total; }

  // Manager `stage` commits to q after predecessors produced `prefix`;
  // later managers respond optimally on the grid. Writes the continuation
  // into `out` and returns T_stage.
  double manager_value(int stage, double prefix, double q, Choices& out) const {
    out[stage - 1] = q;
    respond(stage + 1, prefix + q, out);
    double total = prefix;
    for (int k = stage; k <= n_; ++k) total += out[k - 1];
    return (price(total) - c_ + rates_[stage - 1]) * q;
  }

  // Grid-optimal choices of stages `stage`..n given the predecessors' total.
  // The managers' objectives depend on the history only through that total.
  void respond(int stage, double prefix, Choices& out) const {
    if (stage > n_) return;
    Choices scratch = out;
    const GridBest best = grid_argmax(grid_, [&](double q) { return manager_value(stage, prefix, q, scratch); });
    manager_value(stage, prefix, best.x, out);
  }

 private:
  int n_;
  double a_;
  double c_;
  std::vector<double> rates_;
  GridSpec grid_;
  PriceRule rule_;
};

inline std::vector<double> to_doubles(std::span<const Rational> values) {
  std::vector<double> out;
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

inline void check_oracle_size(const MarketParams& params) {
  if (params.n > kMaxOracleFirms)
    fail(ErrorCode::kBadN, "grid oracle supports n <= 4, got " + std::to_string(params.n));
}

}  // namespace detail

struct FloatProfile {
  std::vector<double> quantities;
  double price = 0.0;
};

/// Backward induction over the quantity grid for fixed incentives.
/// The reported price is always max{a - Q, 0}.
inline FloatProfile oracle_subgame(const MarketParams& params, const IncentiveVector& incentives,
                                   const GridSpec& grid, PriceRule rule = PriceRule::kLinear) {
  validate(params, incentives);
  detail::check_oracle_size(params);
  check_grid(grid);
  detail::SubgameOracle oracle(params, detail::to_doubles(incentives.rates), grid, rule);
  detail::Choices choices{};
  oracle.respond(1, 0.0, choices);
  FloatProfile out{std::vector<double>(choices.begin(), choices.begin() + params.n), 0.0};
  double total = 0;
  for (double q : out.quantities) total += q;
  out.price = std::max(to_double(params.a) - total, 0.0);
  return out;
}

struct StageCertificate {
  int stage = 0;
  double analytic = 0.0;   // equilibrium choice
  double oracle = 0.0;     // grid-optimal choice
  double deviation = 0.0;  // |oracle - analytic|
  double gain = 0.0;       // best grid payoff minus equilibrium payoff
};

/// One-shot deviation check for manager `stage`: predecessors fixed at the
/// equilibrium quantities, the manager searches the grid, and successors
/// follow their step-1 reaction forms (floored at zero) on the realized
/// history.
inline StageCertificate quantity_stage_certificate(const MarketParams& params, const IncentiveVector& incentives,
                                                   std::span<const Rational> equilibrium, int stage,
                                                   const GridSpec& grid) {
  validate(params, incentives);
  check_grid(grid);
  const int n = params.n;
  if (stage < 1 || stage > n || static_cast<int>(equilibrium.size()) != n)
    fail(ErrorCode::kLengthMismatch, "bad stage or equilibrium profile");
  const ReactionChain chain = build_reaction_chain(params, incentives);

  // Successor reaction forms in floating point: constant, then coefficients of q_1..q_{k-1}.
  std::vector<std::vector<double>> forms(static_cast<size_t>(n + 1));
  for (int k = stage + 1; k <= n; ++k) {
    const AffineForm& f = chain.form(k, 1);
    forms[k].push_back(to_double(f.constant()));
    for (int j = 1; j < k; ++j) forms[k].push_back(to_double(f.coefficient(j)));
  }
  std::vector<double> history = detail::to_doubles(equilibrium);
  const double a = to_double(params.a);
  const double c = to_double(params.c);
  const double rate = to_double(incentives.at_stage(stage));

  auto objective = [&](double q) {
    history[stage - 1] = q;
    for (int k = stage + 1; k <= n; ++k) {
      double v = forms[k][0];
      for (int j = 1; j < k; ++j) v += forms[k][j] * history[j - 1];
      history[k - 1] = std::max(v, 0.0);
    }
    double total = 0;
    for (double x : history) total += x;
    return (a - total - c + rate) * q;
  };
  const detail::GridBest best = detail::grid_argmax(grid, objective);
  const double q_star = to_double(equilibrium[stage - 1]);
  const double star_value = objective(q_star);
  return {stage, q_star, best.x, std::abs(best.x - q_star), best.value - star_value};
}

namespace detail {

// Owner `stage`'s profit when its rate is replaced by `rate`.
inline double owner_profit(const MarketParams& params, std::vector<double> rates, int stage, double rate,
                           const GridSpec& inner) {
  rates[stage - 1] = rate;
  const double a = to_double(params.a);
  const double c = to_double(params.c);
  auto sol = closed_form_subgame<double>(params.n, a, c, rates);
  const bool interior =
      sol.price > c && std::all_of(sol.quantities.begin(), sol.quantities.end(), [](double q) { return q > 0; });
  if (interior) return (sol.price - c) * sol.quantities[stage - 1];

  SubgameOracle oracle(params, rates, inner);
  Choices choices{};
  oracle.respond(1, 0.0, choices);
  double total = 0;
  for (int k = 0; k < params.n; ++k) total += choices[k];
  return (oracle.price(total) - c) * choices[stage - 1];
}

}  // namespace detail

/// Grid-searched stage-0 best response of owner `stage`; `others` supplies
/// the remaining rates (entry `stage` is ignored).
inline double oracle_delegation_best_response(const MarketParams& params, int stage, const IncentiveVector& others,
                                              const GridSpec& grid) {
  validate(params, others);
  detail::check_oracle_size(params);
  check_grid(grid);
  if (stage < 1 || stage > params.n) fail(ErrorCode::kBadN, "stage out of range");
  const GridSpec inner = fallback_grid(params);
  const auto rates = detail::to_doubles(others.rates);
  return detail::grid_argmax(grid, [&](double x) { return detail::owner_profit(params, rates, stage, x, inner); })
      .x;
}

inline StageCertificate delegation_stage_certificate(const MarketParams& params, const IncentiveVector& equilibrium,
                                                     int stage, const GridSpec& grid) {
  validate(params, equilibrium);
  detail::check_oracle_size(params);
  check_grid(grid);
  const GridSpec inner = fallback_grid(params);
  const auto rates = detail::to_doubles(equilibrium.rates);
  const detail::GridBest best =
      detail::grid_argmax(grid, [&](double x) { return detail::owner_profit(params, rates, stage, x, inner); });
  const double a_star = rates[stage - 1];
  const double star_value = detail::owner_profit(params, rates, stage, a_star, inner);
  return {stage, a_star, best.x, std::abs(best.x - a_star), best.value - star_value};
}

struct GradientReport {
  double finite_difference = 0.0;
  double analytic = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;  // infinite when the analytic value is 0 but the difference is not
  bool one_sided = false;  // forward difference at the a_i >= 0 boundary
};

/// Finite difference of owner `stage`'s profit in its own rate against
/// 2^{n-i} [(P - c)(1 - 2^-i) - 2^-i (P - c + a_i)].
inline GradientReport owner_gradient_check(const MarketParams& params, const IncentiveVector& incentives, int stage,
                                           double step) {
  validate(params, incentives);
  if (stage < 1 || stage > params.n) fail(ErrorCode::kBadN, "stage out of range");
  if (!(step > 0)) fail(ErrorCode::kUsage, "finite-difference step must be positive");
  const int n = params.n;
  const double a = to_double(params.a);
  const double c = to_double(params.c);
  const auto rates = detail::to_doubles(incentives.rates);
  auto profit = [&](double rate) {
    auto r = rates;
    r[stage - 1] = rate;
    auto sol = closed_form_subgame<double>(n, a, c, r);
    return (sol.price - c) * sol.quantities[stage - 1];
  };

  GradientReport rep;
  const double x = rates[stage - 1];
  rep.one_sided = x - step < 0;
  rep.finite_difference =
      rep.one_sided ? (profit(x + step) - profit(x)) / step : (profit(x + step) - profit(x - step)) / (2 * step);

  auto sol = closed_form_subgame<double>(n, a, c, rates);
  const double markup = sol.price - c;
  const double w = std::ldexp(1.0, -stage);
  rep.analytic = std::ldexp(markup * (1 - w) - w * (markup + x), n - stage);
  rep.abs_error = std::abs(rep.finite_difference - rep.analytic);
  rep.rel_error = rep.analytic != 0 ? rep.abs_error / std::abs(rep.analytic)
                                    : (rep.abs_error == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  return rep;
}

inline constexpr double kDeviationTolerance = 1e-5;
inline constexpr double kGainTolerance = 1e-9;

struct VerificationReport {
  MarketParams params;
  FloatProfile backward_induction;          // full grid backward induction
  double backward_induction_deviation = 0;  // max |oracle - analytic| quantity
  std::vector<StageCertificate> quantity;
  std::vector<StageCertificate> delegation;
  double max_deviation = 0.0;
  double max_gain = 0.0;
  bool passed = false;
};

/// Grid backward induction against the analytic equilibrium, plus
/// no-profitable-deviation certificates for every quantity stage and every
/// owner.
inline VerificationReport verify_equilibrium(const MarketParams& params, const GridSpec& subgame_grid,
                                             const GridSpec& deviation_grid) {
  detail::check_oracle_size(params);
  const EquilibriumOutcome eq = solve_spne(params);
  VerificationReport rep;
  rep.params = params;
  rep.backward_induction = oracle_subgame(params, eq.incentives, subgame_grid);
  for (int i = 1; i <= params.n; ++i)
    rep.backward_induction_deviation =
        std::max(rep.backward_induction_deviation,
                 std::abs(rep.backward_induction.quantities[i - 1] - to_double(eq.profile.at_stage(i))));
  for (int i = 1; i <= params.n; ++i)
    rep.quantity.push_back(
        quantity_stage_certificate(params, eq.incentives, eq.profile.quantities, i, deviation_grid));
  for (int i = 1; i <= params.n; ++i)
    rep.delegation.push_back(delegation_stage_certificate(params, eq.incentives, i, deviation_grid));
  rep.max_deviation = rep.backward_induction_deviation;
  for (const auto* group : {&rep.quantity, &rep.delegation})
    for (const auto& cert : *group) {
      rep.max_deviation = std::max(rep.max_deviation, cert.deviation);
      rep.max_gain = std::max(rep.max_gain, cert.gain);
    }
  rep.passed = rep.max_deviation < kDeviationTolerance && rep.max_gain < kGainTolerance;
  return rep;
}

/// Grid used for one-shot deviation searches by verify_equilibrium.
inline GridSpec deviation_grid(const MarketParams& params) {
  return with_enough_rounds({0.0, to_double(params.margin()), 201, 5});
}

inline VerificationReport verify_equilibrium(const MarketParams& params) {
  const GridSpec deviation = deviation_grid(params);
  return verify_equilibrium(params, default_grid(params), deviation);
}

}  // namespace stackdel
