#pragma once

// The quantity subgame (stages 1..n) for fixed incentive rates.
//
// Two independent routes: the closed form q_i = (P - c + a_i) 2^{n-i},
// P = a/2^n + sum_j (c - a_j)/2^j, and a symbolic backward induction that
// builds every step-m reaction function f_i^m as an affine form in the
// quantities of the first i - m movers.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackdel/core_model.hpp"

namespace stackdel {

namespace detail {

template <class T>
T times_pow2(const T& x, int k) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::ldexp(x, k);
  } else {
    return x * pow2(k);
  }
}

}  // namespace detail

template <class T>
struct SubgameSolution {
  std::vector<T> quantities;
  T price;
};

/// Evaluates the interior-branch closed form without any positivity check.
/// Instantiated for Rational (exact) and double (oracle).
template <class T>
SubgameSolution<T> closed_form_subgame(int n, const T& a, const T& c, std::span<const T> rates) {
  T price = detail::times_pow2(a, -n);
  for (int j = 1; j <= n; ++j) price += detail::times_pow2(T(c - rates[j - 1]), -j);
  SubgameSolution<T> out{std::vector<T>(static_cast<size_t>(n)), price};
  for (int i = 1; i <= n; ++i) out.quantities[i - 1] = detail::times_pow2(T(price - c + rates[i - 1]), n - i);
  return out;
}

/// Closed-form subgame solution. Throws NONINTERIOR unless every quantity is
/// strictly positive and the price is strictly above marginal cost; the
/// formula is meaningless outside that region.
inline QuantityProfile solve_subgame_closed(const MarketParams& params, const IncentiveVector& incentives) {
  validate(params, incentives);
  auto sol = closed_form_subgame<Rational>(params.n, params.a, params.c, incentives.rates);
  for (int i = 1; i <= params.n; ++i)
    if (sol.quantities[i - 1] <= 0)
      fail(ErrorCode::kNonInterior, "closed form gives q_" + std::to_string(i) + " = " +
                                        to_fraction(sol.quantities[i - 1]) + " <= 0");
  if (sol.price <= params.c)
    fail(ErrorCode::kNonInterior, "closed form gives price " + to_fraction(sol.price) + " <= c");
  return {std::move(sol.quantities), std::move(sol.price), true};
}

/// constant + sum_j coefficient_j * q_j, keyed by stage j (1-based).
class AffineForm {
 public:
  AffineForm() = default;
  explicit AffineForm(Rational constant) : constant_(std::move(constant)) {}

  static AffineForm variable(int stage) {
    AffineForm f;
    f.add_term(stage, 1);
    return f;
  }

  const Rational& constant() const { return constant_; }
  const std::map<int, Rational>& coefficients() const { return coefficients_; }

  Rational coefficient(int stage) const {
    auto it = coefficients_.find(stage);
    return it == coefficients_.end() ? Rational(0) : it->second;
  }

  int max_stage() const { return coefficients_.empty() ? 0 : coefficients_.rbegin()->first; }

  void add_constant(const Rational& value) { constant_ += value; }

  void add_term(int stage, const Rational& coef) {
    Rational& slot = coefficients_[stage];
    slot += coef;
    if (slot == 0) coefficients_.erase(stage);
  }

  AffineForm& operator+=(const AffineForm& other) {
    constant_ += other.constant_;
    for (const auto& [stage, coef] : other.coefficients_) add_term(stage, coef);
    return *this;
  }

  AffineForm& operator*=(const Rational& factor) {
    if (factor == 0) return *this = AffineForm();
    constant_ *= factor;
    for (auto& [stage, coef] : coefficients_) coef *= factor;
    return *this;
  }

  friend AffineForm operator+(AffineForm lhs, const AffineForm& rhs) { return lhs += rhs; }
  friend AffineForm operator*(AffineForm lhs, const Rational& factor) { return lhs *= factor; }

  /// Replaces q_stage by `replacement`.
  AffineForm substitute(int stage, const AffineForm& replacement) const {
    auto it = coefficients_.find(stage);
    if (it == coefficients_.end()) return *this;
    AffineForm out = *this;
    Rational factor = it->second;
    out.coefficients_.erase(stage);
    out += replacement * factor;
    return out;
  }

  /// `quantities[j - 1]` supplies q_j; must cover every stage with a
  /// nonzero coefficient.
  Rational evaluate(std::span<const Rational> quantities) const {
    if (static_cast<size_t>(max_stage()) > quantities.size())
      fail(ErrorCode::kLengthMismatch, "affine form needs q_" + std::to_string(max_stage()));
    Rational value = constant_;
    for (const auto& [stage, coef] : coefficients_) value += coef * quantities[stage - 1];
    return value;
  }

  bool operator==(const AffineForm&) const = default;

 private:
  Rational constant_ = 0;
  std::map<int, Rational> coefficients_;
};

struct ReactionChain {
  MarketParams params;
  IncentiveVector incentives;
  // forms[i][m] is f_i^m for 2 <= i <= n, 1 <= m < i; other slots are empty.
  std::vector<std::vector<AffineForm>> forms;
  // rival_output[i]: Q^i + sum_{k>i} f_k^{k-i}, i.e. the output of every
  // other firm as anticipated by manager i, as a form in q_1..q_i.
  std::vector<AffineForm> rival_output;
  Rational leader_quantity;

  int n() const { return params.n; }
  const AffineForm& form(int stage, int step) const {
    if (stage < 2 || stage > n() || step < 1 || step >= stage)
      fail(ErrorCode::kLengthMismatch,
           "no reaction function f_" + std::to_string(stage) + "^" + std::to_string(step));
    return forms[stage][step];
  }
};

/// Backward induction over affine reaction functions. Each manager's
/// objective is quadratic in its own quantity; the maximizer is affine in
/// predecessors' quantities. No clamping at zero is performed.
inline ReactionChain build_reaction_chain(const MarketParams& params, const IncentiveVector& incentives) {
  validate(params, incentives);
  const int n = params.n;
  ReactionChain chain{params, incentives, std::vector<std::vector<AffineForm>>(n + 1),
                      std::vector<AffineForm>(n + 1), 0};
  for (int i = 2; i <= n; ++i) chain.forms[i].resize(i);

  // successors[k] holds f_k^{k-i} while stage i is being processed.
  std::vector<AffineForm> successors(n + 1);
  for (int i = n; i >= 1; --i) {
    AffineForm rival;
    for (int j = 1; j < i; ++j) rival.add_term(j, 1);
    for (int k = i + 1; k <= n; ++k) rival += successors[k];
    chain.rival_output[i] = rival;

    // T_i = (a - c + a_i - rival - q_i) q_i; the q_i^2 coefficient is -curvature.
    const Rational curvature = 1 + rival.coefficient(i);
    if (curvature <= 0)
      fail(ErrorCode::kNonConcave, "objective of stage " + std::to_string(i) + " is not strictly concave");

    AffineForm best(params.margin() + incentives.at_stage(i));
    AffineForm others = rival.substitute(i, AffineForm());
    best += others * Rational(-1);
    best *= Rational(1) / (2 * curvature);

    if (i == 1) {
      chain.leader_quantity = best.constant();
      break;
    }
    chain.forms[i][1] = best;
    for (int k = i + 1; k <= n; ++k) {
      successors[k] = successors[k].substitute(i, best);
      chain.forms[k][k - i + 1] = successors[k];
    }
    successors[i] = best;
  }
  return chain;
}

/// Forward pass q_1 = leader, q_i = f_i^1(q_1..q_{i-1}). The result is the
/// unclamped interior branch; `interior` reports whether it is valid.
inline QuantityProfile evaluate_chain(const ReactionChain& chain) {
  const int n = chain.n();
  QuantityProfile profile;
  profile.quantities.reserve(static_cast<size_t>(n));
  profile.quantities.push_back(chain.leader_quantity);
  for (int i = 2; i <= n; ++i) profile.quantities.push_back(chain.forms[i][1].evaluate(profile.quantities));
  profile.price = clamped_price(chain.params, profile.total());
  // The clamp only matters off the interior branch.
  profile.interior = chain.params.a - profile.total() == profile.price &&
                     is_interior(chain.params, profile.quantities, profile.price);
  return profile;
}

struct InteriorityReport {
  bool interior = false;
  std::optional<int> violating_stage;
  // Stage slack a - c + a_i - Q^i - sum_{k>i} f_k^{k-i}(..., 0) at the first
  // violation, or P* - c when only the price condition fails.
  std::optional<Rational> slack;
  bool price_violation = false;
  std::vector<Rational> stage_slacks;
};

/// Walks the candidate interior solution and evaluates each manager's
/// marginal objective at zero own output. A nonpositive slack means the
/// manager would not produce, so the interior branch is invalid there.
inline InteriorityReport check_interiority(const MarketParams& params, const IncentiveVector& incentives) {
  const ReactionChain chain = build_reaction_chain(params, incentives);
  const QuantityProfile candidate = evaluate_chain(chain);

  InteriorityReport report;
  std::vector<Rational> prefix;
  for (int i = 1; i <= params.n; ++i) {
    prefix.push_back(0);
    Rational slack = params.margin() + incentives.at_stage(i) - chain.rival_output[i].evaluate(prefix);
    prefix.back() = candidate.quantities[i - 1];
    if (slack <= 0 && !report.violating_stage) {
      report.violating_stage = i;
      report.slack = slack;
    }
    report.stage_slacks.push_back(std::move(slack));
  }
  if (!report.violating_stage) {
    Rational markup = params.a - candidate.total() - params.c;
    if (markup <= 0) {
      report.violating_stage = params.n;
      report.slack = markup;
      report.price_violation = true;
    }
  }
  report.interior = !report.violating_stage.has_value();
  return report;
}

}  // namespace stackdel
