#pragma once

// Stage 0: owners choose incentive rates simultaneously, anticipating the
// quantity subgame. Solved three ways (closed form, exact linear system,
// iterated best responses) and assembled into the full equilibrium.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stackdel/core_model.hpp"
#include "stackdel/linear_solve.hpp"
#include "stackdel/reaction_engine.hpp"

namespace stackdel {

/// sigma(i) = (2^{i+1} - 2) / (2^i - 2), defined for i >= 2.
inline Rational sigma(int i) {
  if (i < 2) fail(ErrorCode::kBadN, "sigma(i) needs i >= 2");
  return (pow2(i + 1) - 2) / (pow2(i) - 2);
}

/// D_i = 2^{i+1} / (sigma(i) - 1).
inline Rational d_coef(int i) { return pow2(i + 1) / (sigma(i) - 1); }

/// h(n) = -2 + 2n + 2^{2-n}.
inline Rational h_closed(int n) { return Rational(2 * n - 2) + pow2(2 - n); }

/// sigma(2) + sum_{i=3}^n (sigma(2) - 1) / (sigma(i) - 1); equals h(n).
inline Rational h_from_sigma(int n) {
  const Rational s2 = sigma(2);
  Rational h = s2;
  for (int i = 3; i <= n; ++i) h += (s2 - 1) / (sigma(i) - 1);
  return h;
}

struct StructuralConstants {
  int n = 0;
  std::vector<Rational> sigma;   // stage i at index i - 2
  std::vector<Rational> d_coef;  // stage i at index i - 2
  Rational h;

  const Rational& sigma_at(int i) const { return sigma.at(static_cast<size_t>(i - 2)); }
  const Rational& d_at(int i) const { return d_coef.at(static_cast<size_t>(i - 2)); }
};

inline StructuralConstants structural_constants(int n) {
  check_firm_count(n);
  StructuralConstants k{n, {}, {}, h_closed(n)};
  for (int i = 2; i <= n; ++i) {
    k.sigma.push_back(sigma(i));
    k.d_coef.push_back(d_coef(i));
  }
  ensure(k.h == h_from_sigma(n), "h(n) closed form disagrees with the sigma sum at n=" + std::to_string(n));
  return k;
}

/// Value of the owner's reaction function for stage >= 2, generic over the
/// scalar so the iterated solver can run it in floating point:
/// max{0, (2^i / sigma(i)) [(a - c)/2^n - sum_{j != i} a_j / 2^j]}.
template <class T>
T owner_reaction(int n, const T& margin, int stage, std::span<const T> rates, const T& sigma_i) {
  T slack = detail::times_pow2(margin, -n);
  for (int j = 1; j <= n; ++j)
    if (j != stage) slack -= detail::times_pow2(rates[j - 1], -j);
  T value = detail::times_pow2(slack, stage) / sigma_i;
  return value > T(0) ? value : T(0);
}

/// Owner i's best incentive rate given the others' rates (entry `stage` of
/// `others` is ignored). The first mover never delegates.
inline Rational owner_best_response(const MarketParams& params, int stage, const IncentiveVector& others) {
  validate(params);
  validate(params, others);
  if (stage < 1 || stage > params.n) fail(ErrorCode::kBadN, "stage out of range");
  if (stage == 1) return 0;
  return owner_reaction<Rational>(params.n, params.margin(), stage, others.rates, sigma(stage));
}

enum class DelegationMethod { kClosed, kLinearSystem, kIteratedBestResponse };

inline std::string_view to_string(DelegationMethod m) {
  switch (m) {
    case DelegationMethod::kClosed: return "closed";
    case DelegationMethod::kLinearSystem: return "linear-system";
    case DelegationMethod::kIteratedBestResponse: return "iterated-br";
  }
  return "unknown";
}

inline IncentiveVector delegation_closed(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  const Rational scale = params.margin() / (pow2(n) * h_closed(n));
  IncentiveVector out = IncentiveVector::zeros(n);
  for (int i = 2; i <= n; ++i) out.rates[i - 1] = d_coef(i) * scale;
  return out;
}

/// Solves the owners' first-order conditions for stages 2..n:
/// sigma(i) a_i / 2^i + sum_{j != i} a_j / 2^j = (a - c) / 2^n.
inline IncentiveVector delegation_linear_system(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  const size_t m = static_cast<size_t>(n - 1);
  std::vector<std::vector<Rational>> matrix(m, std::vector<Rational>(m));
  std::vector<Rational> rhs(m, params.margin() / pow2(n));
  for (int i = 2; i <= n; ++i)
    for (int j = 2; j <= n; ++j) matrix[i - 2][j - 2] = (i == j ? sigma(i) : Rational(1)) / pow2(j);
  auto solution = solve_linear_system(std::move(matrix), std::move(rhs));
  IncentiveVector out = IncentiveVector::zeros(n);
  for (int i = 2; i <= n; ++i) out.rates[i - 1] = std::move(solution[i - 2]);
  return out;
}

struct IterationOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
};

struct IterationResult {
  std::vector<double> rates;
  int iterations = 0;
};

/// Sequential (Gauss-Seidel) best-response dynamics in double precision,
/// starting from zero rates; stops once a full sweep moves no rate by more
/// than `tolerance`.
inline IterationResult iterate_best_responses(const MarketParams& params, IterationOptions options = {}) {
  validate(params);
  const int n = params.n;
  const double margin = to_double(params.margin());
  std::vector<double> sigmas(static_cast<size_t>(n + 1), 0.0);
  for (int i = 2; i <= n; ++i) sigmas[i] = to_double(sigma(i));

  IterationResult result{std::vector<double>(static_cast<size_t>(n), 0.0), 0};
  while (result.iterations < options.max_iterations) {
    ++result.iterations;
    double moved = 0;
    for (int i = 2; i <= n; ++i) {
      double next = owner_reaction<double>(n, margin, i, result.rates, sigmas[i]);
      moved = std::max(moved, std::abs(next - result.rates[i - 1]));
      result.rates[i - 1] = next;
    }
    if (moved < options.tolerance) return result;
  }
  fail(ErrorCode::kNoConvergence,
       "best-response iteration did not settle within " + std::to_string(options.max_iterations) + " sweeps");
}

inline IncentiveVector solve_delegation(const MarketParams& params, DelegationMethod method) {
  switch (method) {
    case DelegationMethod::kClosed: return delegation_closed(params);
    case DelegationMethod::kLinearSystem: return delegation_linear_system(params);
    case DelegationMethod::kIteratedBestResponse: {
      IncentiveVector out;
      for (double r : iterate_best_responses(params).rates) out.rates.push_back(from_double(r));
      return out;
    }
  }
  fail(ErrorCode::kUsage, "unknown delegation method");
}

enum class Regime { kStackelbergDelegation, kCournotDelegation, kStackelbergPlain, kCournotPlain };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kStackelbergDelegation: return "stackelberg-delegation";
    case Regime::kCournotDelegation: return "cournot-delegation";
    case Regime::kStackelbergPlain: return "stackelberg-plain";
    case Regime::kCournotPlain: return "cournot-plain";
  }
  return "unknown";
}

inline Regime parse_regime(std::string_view text) {
  for (Regime r : {Regime::kStackelbergDelegation, Regime::kCournotDelegation, Regime::kStackelbergPlain,
                   Regime::kCournotPlain})
    if (to_string(r) == text) return r;
  fail(ErrorCode::kUsage, "unknown regime '" + std::string(text) + "'");
}

struct EquilibriumOutcome {
  Regime regime = Regime::kStackelbergDelegation;
  MarketParams params;
  IncentiveVector incentives;
  QuantityProfile profile;
  std::vector<Rational> owner_profits;
  Rational total_quantity;

  bool operator==(const EquilibriumOutcome&) const = default;
};

/// Builds an outcome record from incentives and quantities, pricing it with
/// evaluate_outcome.
inline EquilibriumOutcome make_outcome(Regime regime, const MarketParams& params, IncentiveVector incentives,
                                       const std::vector<Rational>& quantities) {
  MarketOutcome priced = evaluate_outcome(params, incentives, quantities);
  EquilibriumOutcome out{regime, params, std::move(incentives), std::move(priced.profile),
                         std::move(priced.owner_profits), 0};
  out.total_quantity = out.profile.total();
  return out;
}

/// Subgame-perfect equilibrium of the sequential game with delegation.
/// The subgame solver's output is checked against the closed-form price,
/// quantities, total output and profits.
inline EquilibriumOutcome solve_spne(const MarketParams& params) {
  validate(params);
  const int n = params.n;
  IncentiveVector incentives = delegation_closed(params);

  // Every owner i >= 2 must sit on the positive branch of its reaction.
  for (int i = 2; i <= n; ++i) {
    Rational others = 0;
    for (int j = 1; j <= n; ++j)
      if (j != i) others += incentives.at_stage(j) / pow2(j);
    ensure(others < params.margin() / pow2(n), "zero-incentive branch binds at stage " + std::to_string(i));
  }

  QuantityProfile profile = solve_subgame_closed(params, incentives);
  EquilibriumOutcome out = make_outcome(Regime::kStackelbergDelegation, params, incentives, profile.quantities);

  const Rational h = h_closed(n);
  const Rational m = params.margin();
  for (int i = 1; i <= n; ++i) {
    ensure(out.profile.at_stage(i) == (2 - pow2(1 - i)) * m / h, "quantity formula, stage " + std::to_string(i));
    ensure(out.owner_profits[i - 1] == m * m * (1 - pow2(-i)) / (pow2(n - 2) * h * h),
           "profit formula, stage " + std::to_string(i));
  }
  ensure(out.profile.price == params.c + m / (pow2(n - 1) * h), "price formula");
  if (params.c == 0) ensure(out.profile.price == params.a / (pow2(n - 1) * h), "price formula at c = 0");
  ensure(out.total_quantity == m * (1 - pow2(-n) + (Rational(2 * n - 4) + pow2(2 - n)) / (pow2(n) * h)),
         "total quantity formula");
  ensure(params.a - out.total_quantity == out.profile.price, "market clearing");
  return out;
}

}  // namespace stackdel
