#include "pct/motivation.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

namespace pct {
namespace {

Need make_need(const std::string& name, double level, double setpoint, double weight = 1.0,
               const std::string& outcome = "") {
    Need need;
    need.name = name;
    need.level = level;
    need.setpoint = setpoint;
    need.weight = weight;
    need.desired_outcome = outcome.empty() ? "get_" + name : outcome;
    return need;
}

TEST(Needs, DeficitIsSetpointMinusLevel) {
    EXPECT_DOUBLE_EQ(make_need("energy", 2.0, 5.0).deficit(), 3.0);
    EXPECT_DOUBLE_EQ(make_need("energy", 5.0, 5.0).deficit(), 0.0);
    EXPECT_DOUBLE_EQ(make_need("energy", 7.0, 5.0).deficit(), -2.0);
}

TEST(Needs, IntrinsicErrorIsWeightedSquaredDeficits) {
    const std::vector<Need> needs{make_need("a", 1.0, 3.0, 2.0), make_need("b", 4.0, 4.0, 5.0)};
    EXPECT_DOUBLE_EQ(intrinsic_error_from_needs(needs), 2.0 * 4.0);
}

TEST(Needs, UpdateDepletesAndSatisfiesWithClamping) {
    auto need = make_need("energy", 1.0, 5.0);
    need.depletion_rate = 0.5;
    need.max_level = 5.0;
    auto updated = update_needs({need}, {}, 1.0);
    EXPECT_DOUBLE_EQ(updated[0].level, 0.5);
    updated = update_needs(updated, {{"energy", 10.0}}, 1.0);
    EXPECT_DOUBLE_EQ(updated[0].level, 5.0);  // clamped at max
    updated = update_needs(updated, {}, 20.0);
    EXPECT_DOUBLE_EQ(updated[0].level, 0.0);  // clamped at min
}

TEST(Needs, UpdateRejectsBadInputs) {
    const std::vector<Need> needs{make_need("a", 1.0, 2.0)};
    EXPECT_THROW(update_needs(needs, {}, 0.0), invalid_input_error);
    EXPECT_THROW(update_needs(needs, {{"a", std::nan("")}}, 1.0), invalid_input_error);
}

TEST(Desires, OnlyDeficientNeedsActivate) {
    const std::vector<Need> needs{make_need("hungry", 1.0, 5.0), make_need("fine", 5.0, 5.0)};
    const auto desires = derive_desires(needs, 0.1);
    ASSERT_EQ(desires.active.size(), 1u);
    EXPECT_EQ(desires.active[0].need_name, "hungry");
    EXPECT_EQ(desires.active[0].outcome, "get_hungry");
    EXPECT_DOUBLE_EQ(desires.active[0].urgency, 4.0);
}

TEST(Desires, SortedByUrgencyThenName) {
    const std::vector<Need> needs{make_need("b", 0.0, 2.0), make_need("c", 0.0, 3.0),
                                  make_need("a", 0.0, 2.0)};
    const auto desires = derive_desires(needs, 0.0);
    ASSERT_EQ(desires.active.size(), 3u);
    EXPECT_EQ(desires.active[0].need_name, "c");
    EXPECT_EQ(desires.active[1].need_name, "a");  // urgency tie with b, name wins
    EXPECT_EQ(desires.active[2].need_name, "b");
}

TEST(Desires, WeightScalesUrgency) {
    const std::vector<Need> needs{make_need("small_deficit_heavy", 4.0, 5.0, 10.0),
                                  make_need("big_deficit_light", 0.0, 5.0, 1.0)};
    const auto desires = derive_desires(needs, 0.0);
    EXPECT_EQ(desires.active[0].need_name, "small_deficit_heavy");  // 10 > 5
}

TEST(Intention, StrictMaxWins) {
    const std::vector<Need> needs{make_need("a", 0.0, 1.0), make_need("b", 0.0, 4.0)};
    const auto intention = select_intention(derive_desires(needs, 0.0));
    ASSERT_TRUE(intention.has_value());
    EXPECT_EQ(intention->need_name, "b");
    EXPECT_DOUBLE_EQ(intention->urgency, 4.0);
}

TEST(Intention, SatiatedAgentIsIdle) {
    const std::vector<Need> needs{make_need("a", 5.0, 5.0), make_need("b", 3.0, 3.0)};
    EXPECT_FALSE(select_intention(derive_desires(needs, 0.1)).has_value());
}

// Intention choice depends on the urgency ordering only, not on the
// absolute scale: multiplying all weights by a constant never changes it.
TEST(Intention, InvariantUnderUrgencyRescaling) {
    std::vector<Need> needs{make_need("a", 0.0, 2.0, 1.5), make_need("b", 1.0, 4.0, 0.8),
                            make_need("c", 0.5, 1.0, 3.0)};
    const auto baseline = select_intention(derive_desires(needs, 0.0));
    ASSERT_TRUE(baseline.has_value());
    for (double scale : {0.01, 0.5, 2.0, 100.0}) {
        auto scaled = needs;
        for (Need& need : scaled) need.weight *= scale;
        const auto choice = select_intention(derive_desires(scaled, 0.0));
        ASSERT_TRUE(choice.has_value());
        EXPECT_EQ(choice->need_name, baseline->need_name) << "scale=" << scale;
    }
}

TEST(Appraisal, ValenceIsNegativeWeightedSquaredError) {
    const std::array<double, 2> errors{1.0, 2.0};
    const std::array<double, 2> weights{1.0, 0.5};
    const auto appraisal = appraise(errors, weights, 0, EnthusiasmPolicy{10, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(appraisal.valence, -(1.0 + 0.5 * 4.0));
    EXPECT_LE(appraisal.valence, 0.0);
}

TEST(Appraisal, ZeroErrorGivesZeroValence) {
    const std::array<double, 3> errors{0.0, 0.0, 0.0};
    const auto appraisal = appraise(errors, {}, 0, EnthusiasmPolicy{10, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(appraisal.valence, 0.0);
}

TEST(Appraisal, ArousalIsNormalisedEffortCappedAtOne) {
    const EnthusiasmPolicy policy{10, 1.0, 2.0};
    EXPECT_DOUBLE_EQ(appraise({}, {}, 0, policy).arousal, 0.0);
    EXPECT_DOUBLE_EQ(appraise({}, {}, 10, policy).arousal, 0.5);
    EXPECT_DOUBLE_EQ(appraise({}, {}, 20, policy).arousal, 1.0);
    EXPECT_DOUBLE_EQ(appraise({}, {}, 1000, policy).arousal, 1.0);
}

TEST(Effort, UrgencyScalesBudgetAndGain) {
    const EnthusiasmPolicy policy{10, 0.4, 0.5};
    const auto calm = enthusiasm_to_effort(policy, 0.0);
    EXPECT_EQ(calm.budget, 10u);
    EXPECT_DOUBLE_EQ(calm.gain, 0.4);
    const auto urgent = enthusiasm_to_effort(policy, 2.0);
    EXPECT_EQ(urgent.budget, 20u);  // 10 * (1 + 0.5*2)
    EXPECT_DOUBLE_EQ(urgent.gain, 0.8);
}

TEST(Effort, BudgetNeverBelowOneAndMonotone) {
    const EnthusiasmPolicy tiny{0, 1.0, 1.0};
    EXPECT_GE(enthusiasm_to_effort(tiny, 5.0).budget, 1u);
    const EnthusiasmPolicy policy{4, 1.0, 1.0};
    std::size_t previous = 0;
    for (double urgency : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const auto effort = enthusiasm_to_effort(policy, urgency);
        EXPECT_GE(effort.budget, previous);
        previous = effort.budget;
    }
    EXPECT_THROW(enthusiasm_to_effort(policy, -1.0), invalid_input_error);
}

}  // namespace
}  // namespace pct
