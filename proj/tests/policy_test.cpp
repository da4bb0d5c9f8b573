#include <gtest/gtest.h>

#include "ctxauth/policy/policy.hpp"

namespace ctxauth {
namespace {

ContextVerdict plausible() { return {true, {}}; }
ContextVerdict implausible() { return {false, {ContextReason::OffSite}}; }

TEST(Policy, RuleTable) {
    EXPECT_EQ(required_security(plausible(), RequestedAction::DefaultAccess).level, Level::Low);
    EXPECT_EQ(required_security(plausible(), RequestedAction::RootAccess).level, Level::High);
    EXPECT_EQ(required_security(implausible(), RequestedAction::DefaultAccess).level, Level::High);
    EXPECT_EQ(required_security(implausible(), RequestedAction::RootAccess).level, Level::High);
}

TEST(Policy, FactorCounts) {
    EXPECT_EQ(SecurityLevel{Level::Low}.required_factors(), 1);
    EXPECT_EQ(SecurityLevel{Level::High}.required_factors(), 2);
}

TEST(Policy, RootDominatesAndRiskIsMonotone) {
    const ContextVerdict verdicts[] = {
        plausible(),
        {false, {ContextReason::OutsideWorkingHours}},
        {false, {ContextReason::OffSite}},
        {false, {ContextReason::OutsideWorkingHours, ContextReason::OffSite}},
    };
    for (const auto& v : verdicts) {
        EXPECT_EQ(required_security(v, RequestedAction::RootAccess).level, Level::High);
        for (auto a : {RequestedAction::DefaultAccess, RequestedAction::RootAccess})
            EXPECT_GE(required_security(v, a), required_security(plausible(), a));
    }
}

TEST(Policy, SeverityIsNotGraded) {
    EXPECT_EQ(required_security({false, {ContextReason::OffSite}}, RequestedAction::DefaultAccess),
              required_security({false, {ContextReason::OffSite, ContextReason::OutsideWorkingHours}},
                                RequestedAction::DefaultAccess));
}

}  // namespace
}  // namespace ctxauth
