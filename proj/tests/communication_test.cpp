#include "pct/communication.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

namespace pct {
namespace {

std::vector<int> alphabet(int k) {
    std::vector<int> symbols(static_cast<std::size_t>(k));
    std::iota(symbols.begin(), symbols.end(), 0);
    return symbols;
}

CommAgent identity_agent(int k) {
    CommAgent agent;
    agent.self.g = alphabet(k);
    agent.self.h = alphabet(k);
    return bind_self_as_other(agent);
}

// Cyclic-shift coder: g maps intention i to signal (i+shift) mod k, h is
// the matching inverse.
CommAgent shift_agent(int k, int shift) {
    CommAgent agent;
    agent.self.g.resize(static_cast<std::size_t>(k));
    agent.self.h.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        agent.self.g[static_cast<std::size_t>(i)] = (i + shift) % k;
        agent.self.h[static_cast<std::size_t>((i + shift) % k)] = i;
    }
    return bind_self_as_other(agent);
}

TEST(Binding, CopiesOwnTransforms) {
    CommAgent agent;
    agent.self.g = {1, 0};
    agent.self.h = {1, 0};
    const auto bound = bind_self_as_other(agent);
    EXPECT_EQ(bound.other_g_hat, agent.self.g);
    EXPECT_EQ(bound.other_h_hat, agent.self.h);
    EXPECT_EQ(bound.binding, ModelBinding::self_as_other);
}

TEST(Binding, RejectsEmptyTransforms) {
    CommAgent empty;
    EXPECT_THROW(bind_self_as_other(empty), invalid_input_error);
}

TEST(Sender, PicksSignalWhoseModelledReadingMatches) {
    const auto agent = shift_agent(4, 1);
    const SearchBudget budget{16, 0.0};
    for (int intention = 0; intention < 4; ++intention) {
        const auto result = sender_select_action(agent, intention, alphabet(4), budget);
        EXPECT_EQ(result.best_candidate, (intention + 1) % 4);
        EXPECT_DOUBLE_EQ(result.best_error, 0.0);
    }
}

TEST(Receiver, InvertsModelledProduction) {
    const auto agent = shift_agent(4, 1);
    const SearchBudget budget{16, 0.0};
    for (int signal = 0; signal < 4; ++signal) {
        const auto result = receiver_infer_intention(agent, signal, alphabet(4), budget);
        EXPECT_EQ(result.best_candidate, (signal + 3) % 4);
        EXPECT_DOUBLE_EQ(result.best_error, 0.0);
    }
}

// With matched coders and a noiseless channel, every intention survives
// the round trip for several alphabet sizes.
TEST(RoundTrip, NoiselessSelfAsOtherIsExact) {
    for (int k : {2, 4, 8}) {
        const auto sender = shift_agent(k, 1);
        const auto receiver = shift_agent(k, 1);
        const auto channel = make_channel(k, 0.0, 7);
        const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
        for (int intention = 0; intention < k; ++intention) {
            const auto episode = run_episode(sender, receiver, channel, intention, budget);
            EXPECT_TRUE(episode.success) << "k=" << k << " intention=" << intention;
            EXPECT_EQ(episode.interpretation, intention);
        }
        EXPECT_DOUBLE_EQ(enumerate_round_trip_accuracy(sender, receiver, k, 0.0, budget), 1.0);
    }
}

// Enumerated accuracy under uniform substitution: a correct decode needs
// the sent symbol to arrive intact, so accuracy equals 1-p exactly when
// the coders are matched and injective.
TEST(RoundTrip, EnumeratedAccuracyMatchesClosedForm) {
    const int k = 4;
    const auto agent = shift_agent(k, 1);
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
    for (double p : {0.0, 0.1, 0.25, 0.5}) {
        EXPECT_NEAR(enumerate_round_trip_accuracy(agent, agent, k, p, budget), 1.0 - p, 1e-12);
    }
}

// Monte-Carlo batches agree with the enumerated oracle within three
// standard errors.
TEST(RoundTrip, BatchedEpisodesMatchEnumeration) {
    const int k = 4;
    const double p = 0.25;
    const int batches = 10000;
    const auto agent = shift_agent(k, 1);
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
    const double exact = enumerate_round_trip_accuracy(agent, agent, k, p, budget);
    int successes = 0;
    for (int s = 0; s < batches; ++s) {
        const auto channel = make_channel(k, p, static_cast<std::uint64_t>(s));
        const auto episode = run_episode(agent, agent, channel, s % k, budget);
        if (episode.success) ++successes;
    }
    const double rate = static_cast<double>(successes) / batches;
    const double se = std::sqrt(exact * (1.0 - exact) / batches);
    EXPECT_NEAR(rate, exact, 3.0 * se);
}

TEST(RoundTrip, AccuracyDegradesMonotonicallyWithNoise) {
    const int k = 4;
    const auto agent = shift_agent(k, 1);
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
    double previous = 1.1;
    for (double p : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double accuracy = enumerate_round_trip_accuracy(agent, agent, k, p, budget);
        EXPECT_LE(accuracy, previous);
        previous = accuracy;
    }
}

// p=1 on a binary alphabet flips every symbol, so matched coders fail on
// every intention.
TEST(RoundTrip, CertainSubstitutionOnBinaryAlphabetAlwaysFails) {
    const auto agent = identity_agent(2);
    const SearchBudget budget{2, 0.0};
    EXPECT_DOUBLE_EQ(enumerate_round_trip_accuracy(agent, agent, 2, 1.0, budget), 0.0);
    for (int s = 0; s < 20; ++s) {
        const auto channel = make_channel(2, 1.0, static_cast<std::uint64_t>(s));
        EXPECT_FALSE(run_episode(agent, agent, channel, s % 2, budget).success);
    }
}

// Mismatched coders: the receiver expects a different shift, so noiseless
// round trips still miss.
TEST(RoundTrip, ModelMismatchBreaksCommunication) {
    const int k = 4;
    const auto sender = shift_agent(k, 1);
    const auto receiver = shift_agent(k, 2);
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
    const double accuracy = enumerate_round_trip_accuracy(sender, receiver, k, 0.0, budget);
    EXPECT_LT(accuracy, 1.0);
}

TEST(Episode, DeterministicGivenSeed) {
    const auto agent = shift_agent(8, 3);
    const SearchBudget budget{8, 0.0};
    auto run = [&] {
        std::vector<int> interpretations;
        for (int intention = 0; intention < 8; ++intention) {
            const auto channel = make_channel(8, 0.3, 99);
            interpretations.push_back(
                run_episode(agent, agent, channel, intention, budget).interpretation);
        }
        return interpretations;
    };
    EXPECT_EQ(run(), run());
}

TEST(Episode, SearchEffortReported) {
    const auto agent = identity_agent(4);
    const auto channel = make_channel(4, 0.0, 1);
    const auto episode = run_episode(agent, agent, channel, 2, SearchBudget{4, 0.0});
    EXPECT_EQ(episode.sender_search_evals, 4u);
    EXPECT_EQ(episode.receiver_search_evals, 4u);
}

TEST(Inputs, EmptyCandidateSetsRejected) {
    const auto agent = identity_agent(2);
    EXPECT_THROW(sender_select_action(agent, 0, {}, SearchBudget{1, 0.0}), invalid_input_error);
    EXPECT_THROW(receiver_infer_intention(agent, 0, {}, SearchBudget{1, 0.0}),
                 invalid_input_error);
}

}  // namespace
}  // namespace pct
