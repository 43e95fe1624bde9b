#include "stackdel/core_model.hpp"

#include "test_support.hpp"

namespace stackdel {
namespace {

using testing::expect_error;
using testing::R;
using testing::Rs;

TEST(Rational, ParsesFractionsIntegersAndDecimalsExactly) {
  EXPECT_EQ(R("1/3"), Rational(1, 3));
  EXPECT_EQ(R("-4/6"), Rational(-2, 3));
  EXPECT_EQ(R("7"), Rational(7));
  EXPECT_EQ(R("0.125"), Rational(1, 8));
  EXPECT_EQ(R("-.5"), Rational(-1, 2));
  EXPECT_EQ(R("3."), Rational(3));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "1/0", "a", "1/-2", "1.2.3", "--1", "/", "."})
    expect_error(ErrorCode::kUsage, [&] { parse_rational(bad); });
}

TEST(Rational, RendersFractionAndDecimal) {
  EXPECT_EQ(to_fraction(Rational(17, 18)), "17/18");
  EXPECT_EQ(to_fraction(Rational(4)), "4");
  EXPECT_EQ(to_decimal(Rational(1, 3)), "0.333333333333");
  EXPECT_EQ(to_decimal(Rational(21505025, 65536)), "328.140640259");
}

TEST(Rational, PowersOfTwoAndDoubleConversion) {
  EXPECT_EQ(pow2(5), Rational(32));
  EXPECT_EQ(pow2(-3), Rational(1, 8));
  EXPECT_EQ(from_double(0.375), Rational(3, 8));
  EXPECT_EQ(to_double(Rational(1, 4)), 0.25);
}

TEST(MarketParams, ValidationCodes) {
  expect_error(ErrorCode::kBadN, [] { validate(MarketParams{1, 1, 0}); });
  expect_error(ErrorCode::kBadN, [] { validate(MarketParams{65, 1, 0}); });
  expect_error(ErrorCode::kInvalidParams, [] { validate(MarketParams{2, 1, R("-1/2")}); });
  expect_error(ErrorCode::kDegenerateDemand, [] { validate(MarketParams{2, 1, 1}); });
  expect_error(ErrorCode::kDegenerateDemand, [] { validate(MarketParams{2, 1, 2}); });
  EXPECT_NO_THROW(validate(MarketParams{64, 3, R("5/2")}));
}

TEST(IncentiveVector, ValidationCodes) {
  const MarketParams p{3, 1, 0};
  expect_error(ErrorCode::kLengthMismatch, [&] { validate(p, IncentiveVector{Rs({"0", "1"})}); });
  expect_error(ErrorCode::kNegativeIncentive, [&] { validate(p, IncentiveVector{Rs({"0", "-1/9", "0"})}); });
  EXPECT_NO_THROW(validate(p, IncentiveVector::zeros(3)));
}

TEST(EvaluateOutcome, ZeroProductionEarnsNothing) {
  const MarketParams p{2, 1, 0};
  const auto out = evaluate_outcome(p, IncentiveVector::zeros(2), Rs({"0", "0"}));
  EXPECT_EQ(out.profile.price, 1);
  EXPECT_EQ(out.owner_profits, Rs({"0", "0"}));
  EXPECT_EQ(out.manager_objectives, Rs({"0", "0"}));
  EXPECT_FALSE(out.profile.interior);
}

TEST(EvaluateOutcome, DuopolyDelegationValues) {
  const MarketParams p{2, 1, 0};
  const auto out = evaluate_outcome(p, IncentiveVector{Rs({"0", "1/3"})}, Rs({"1/3", "1/2"}));
  EXPECT_EQ(out.profile.price, R("1/6"));
  EXPECT_EQ(out.owner_profits, Rs({"1/18", "1/12"}));
  EXPECT_EQ(out.manager_objectives[1], R("1/4"));
  EXPECT_TRUE(out.profile.interior);
}

TEST(EvaluateOutcome, PriceIsClampedAtZero) {
  const MarketParams p{2, 1, 0};
  const auto out = evaluate_outcome(p, IncentiveVector::zeros(2), Rs({"2", "0"}));
  EXPECT_EQ(out.profile.price, 0);
  EXPECT_EQ(out.owner_profits, Rs({"0", "0"}));
}

TEST(EvaluateOutcome, RejectsBadQuantities) {
  const MarketParams p{2, 1, 0};
  expect_error(ErrorCode::kLengthMismatch, [&] { evaluate_outcome(p, IncentiveVector::zeros(2), Rs({"1"})); });
  expect_error(ErrorCode::kNegativeQuantity,
               [&] { evaluate_outcome(p, IncentiveVector::zeros(2), Rs({"1/2", "-1/4"})); });
}

TEST(EvaluateOutcome, ProfitIsLinearInMarkupTimesQuantity) {
  const MarketParams p{3, 5, 2};
  const auto q = Rs({"1/2", "1/3", "1/4"});
  const auto out = evaluate_outcome(p, IncentiveVector{Rs({"0", "1/7", "2"})}, q);
  const Rational price = 5 - R("13/12");
  EXPECT_EQ(out.profile.price, price);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out.owner_profits[i], (price - 2) * q[i]);
  EXPECT_EQ(out.manager_objectives[2], (price - 2 + 2) * q[2]);
}

}  // namespace
}  // namespace stackdel
