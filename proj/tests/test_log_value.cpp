#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "quantfield/log_value.hpp"

using quantfield::LogValue;

TEST(LogValue, ZeroSentinel) {
  const LogValue z = LogValue::from_value(0.0);
  EXPECT_EQ(z.sign, 0);
  EXPECT_TRUE(std::isinf(z.log_magnitude) && z.log_magnitude < 0);
  EXPECT_EQ(LogValue::from_log(3.0, 0).sign, 0);
}

TEST(LogValue, LogSumExpSurvivesHugeArguments) {
  const std::vector<double> args = {1000.0, 1000.0};
  EXPECT_NEAR(quantfield::log_sum_exp(args), 1000.0 + std::log(2.0), 1e-12);
}

TEST(LogValue, SignedSumCancels) {
  const std::vector<LogValue> terms = {LogValue::from_value(5.0), LogValue::from_value(-3.0)};
  EXPECT_NEAR(quantfield::signed_log_sum(terms).value(), 2.0, 1e-14);
  const std::vector<LogValue> huge = {LogValue::from_log(800.0 + std::log(5.0), 1),
                                      LogValue::from_log(800.0 + std::log(3.0), -1)};
  const LogValue diff = quantfield::signed_log_sum(huge);
  EXPECT_EQ(diff.sign, 1);
  EXPECT_NEAR(diff.log_magnitude, 800.0 + std::log(2.0), 1e-12);
  const std::vector<LogValue> opposite = {LogValue::from_value(2.0), LogValue::from_value(-2.0)};
  EXPECT_TRUE(quantfield::signed_log_sum(opposite).is_zero());
}

TEST(LogValue, LogSinhLargeArgument) {
  EXPECT_NEAR(quantfield::log_abs_sinh(2.0), std::log(std::sinh(2.0)), 1e-14);
  EXPECT_NEAR(quantfield::log_abs_sinh(900.0), 900.0 - std::log(2.0), 1e-12);
  EXPECT_EQ(quantfield::log_sinh(-1.0).sign, -1);
}
