#pragma once

#include <random>
#include <vector>

#include "stackdel/core_model.hpp"

namespace stackdel::testing {

/// Random incentive vectors that keep the subgame interior: with
/// a_j = margin * u_j * 2^j / (n 2^n), u_j in [0, 1), the weighted sum
/// sum_j a_j / 2^j stays below margin / 2^n.
class InteriorRateSampler {
 public:
  explicit InteriorRateSampler(unsigned seed) : rng_(seed) {}

  IncentiveVector draw(const MarketParams& params) {
    std::uniform_int_distribution<int> numerator(0, 999);
    IncentiveVector out;
    for (int j = 1; j <= params.n; ++j) {
      Rational u(numerator(rng_), 1000);
      out.rates.push_back(params.margin() * u * pow2(j) / (params.n * pow2(params.n)));
    }
    return out;
  }

  /// Unrestricted draw in [0, margin), used for interiority cross-checks.
  IncentiveVector draw_any(const MarketParams& params) {
    std::uniform_int_distribution<int> numerator(0, 999);
    IncentiveVector out;
    for (int j = 1; j <= params.n; ++j) out.rates.push_back(params.margin() * Rational(numerator(rng_), 1000));
    return out;
  }

 private:
  std::mt19937 rng_;
};

inline std::vector<MarketParams> sample_markets(int n) {
  return {MarketParams{n, 1, 0}, MarketParams{n, 11, 1}, MarketParams{n, Rational(7, 2), Rational(1, 3)}};
}

}  // namespace stackdel::testing
