#pragma once

// Linear market primitives and payoff identities.
//
// Inverse demand P = max{a - Q, 0}, constant marginal cost c. Owner i earns
// u_i = (P - c) q_i; its manager maximizes T_i = (P - c) q_i + a_i q_i,
// where a_i >= 0 is the incentive rate chosen by the owner.
//
// Stages are numbered 1..n in the public API; vectors are stored 0-based,
// so stage i lives at index i - 1.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "stackdel/error.hpp"
#include "stackdel/rational.hpp"

namespace stackdel {

inline constexpr int kMinFirms = 2;
inline constexpr int kMaxFirms = 64;

struct MarketParams {
  int n = 2;
  Rational a = 1;
  Rational c = 0;

  Rational margin() const { return a - c; }
  bool operator==(const MarketParams&) const = default;
};

inline void check_firm_count(int n) {
  if (n < kMinFirms || n > kMaxFirms)
    fail(ErrorCode::kBadN, "n must lie in [2, 64], got " + std::to_string(n));
}

/// Full validation: firm count, c >= 0 and a > c.
inline void validate(const MarketParams& params) {
  check_firm_count(params.n);
  if (params.c < 0) fail(ErrorCode::kInvalidParams, "marginal cost must be nonnegative");
  if (params.a <= params.c)
    fail(ErrorCode::kDegenerateDemand,
         "demand intercept a=" + to_fraction(params.a) + " must exceed cost c=" + to_fraction(params.c));
}

struct IncentiveVector {
  std::vector<Rational> rates;

  static IncentiveVector zeros(int n) { return {std::vector<Rational>(static_cast<size_t>(n))}; }

  int size() const { return static_cast<int>(rates.size()); }
  const Rational& at_stage(int stage) const { return rates.at(static_cast<size_t>(stage - 1)); }
  bool operator==(const IncentiveVector&) const = default;
};

inline void validate(const MarketParams& params, const IncentiveVector& incentives) {
  check_firm_count(params.n);
  if (incentives.size() != params.n)
    fail(ErrorCode::kLengthMismatch, "expected " + std::to_string(params.n) + " incentive rates, got " +
                                         std::to_string(incentives.size()));
  for (int i = 1; i <= params.n; ++i)
    if (incentives.at_stage(i) < 0)
      fail(ErrorCode::kNegativeIncentive, "incentive rate of stage " + std::to_string(i) + " is negative");
}

struct QuantityProfile {
  std::vector<Rational> quantities;
  Rational price;
  // All quantities strictly positive and price strictly above marginal cost.
  bool interior = false;

  Rational total() const {
    Rational sum = 0;
    for (const auto& q : quantities) sum += q;
    return sum;
  }
  const Rational& at_stage(int stage) const { return quantities.at(static_cast<size_t>(stage - 1)); }
  bool operator==(const QuantityProfile&) const = default;
};

struct MarketOutcome {
  QuantityProfile profile;
  std::vector<Rational> owner_profits;
  std::vector<Rational> manager_objectives;
};

inline Rational clamped_price(const MarketParams& params, const Rational& total) {
  Rational p = params.a - total;
  return p > 0 ? p : Rational(0);
}

inline bool is_interior(const MarketParams& params, std::span<const Rational> quantities,
                        const Rational& price) {
  return price > params.c &&
         std::all_of(quantities.begin(), quantities.end(), [](const Rational& q) { return q > 0; });
}

/// Prices an arbitrary quantity profile and evaluates every owner's profit
/// and every manager's objective under the demand clamp.
inline MarketOutcome evaluate_outcome(const MarketParams& params, const IncentiveVector& incentives,
                                      std::span<const Rational> quantities) {
  validate(params, incentives);
  if (static_cast<int>(quantities.size()) != params.n)
    fail(ErrorCode::kLengthMismatch, "expected " + std::to_string(params.n) + " quantities, got " +
                                         std::to_string(quantities.size()));
  Rational total = 0;
  for (size_t i = 0; i < quantities.size(); ++i) {
    if (quantities[i] < 0)
      fail(ErrorCode::kNegativeQuantity, "quantity of stage " + std::to_string(i + 1) + " is negative");
    total += quantities[i];
  }

  MarketOutcome out;
  out.profile.quantities.assign(quantities.begin(), quantities.end());
  out.profile.price = clamped_price(params, total);
  out.profile.interior = is_interior(params, quantities, out.profile.price);
  const Rational markup = out.profile.price - params.c;
  for (size_t i = 0; i < quantities.size(); ++i) {
    out.owner_profits.push_back(markup * quantities[i]);
    out.manager_objectives.push_back((markup + incentives.rates[i]) * quantities[i]);
  }
  return out;
}

}  // namespace stackdel
