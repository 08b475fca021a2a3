#include <gtest/gtest.h>

#include "support/properties.hpp"

using namespace heatcalc::testing;

namespace
{

constexpr int kCases = 120;

void expect_holds(const PropertyOutcome &o)
{
    EXPECT_GE(o.cases, 100);
    EXPECT_TRUE(o.ok()) << o.name << ": " << o.failures << " failures, first: " << o.first_failure;
}

} // namespace

TEST(Properties, ReduceIsIdempotent) { expect_holds(check_reduce_idempotent(kCases, 101)); }

TEST(Properties, ReducePreservesWeight) { expect_holds(check_weight_preserved(kCases, 102)); }

TEST(Properties, DerivativesCommute) { expect_holds(check_derivatives_commute(kCases, 103)); }

TEST(Properties, FunctionalInvariantUnderReduce) { expect_holds(check_reduce_invariance(kCases, 104)); }

TEST(Properties, TotalDerivativesVanish) { expect_holds(check_total_derivative_vanishes(kCases, 105)); }
