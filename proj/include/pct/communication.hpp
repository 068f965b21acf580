#pragma once

// Two-agent signalling over a noisy symbol channel.  The sender picks the
// signal whose predicted interpretation best matches its intention
// (synthesis-by-analysis); the receiver picks the intention whose
// predicted signal best matches what it observed (analysis-by-synthesis).
// With self-as-other binding each agent models the other with its own
// transforms.

#include <cstdint>
#include <vector>

#include "pct/errors.hpp"
#include "pct/search.hpp"
#include "pct/world.hpp"

namespace pct {

// Tabular production/perception transforms over integer alphabets:
// g maps intention -> signal, h maps signal -> interpretation.
struct AgentTransforms {
    std::vector<int> g;
    std::vector<int> h;
};

enum class ModelBinding { learned, self_as_other };

struct CommAgent {
    AgentTransforms self;
    std::vector<int> other_g_hat;  // model of the other's intention -> signal
    std::vector<int> other_h_hat;  // model of the other's signal -> interpretation
    ModelBinding binding = ModelBinding::learned;
};

/// Recruit the agent's own transforms as its model of the other.
inline CommAgent bind_self_as_other(CommAgent agent) {
    if (agent.self.g.empty() || agent.self.h.empty()) {
        throw invalid_input_error("bind_self_as_other: agent transforms must be total");
    }
    agent.other_g_hat = agent.self.g;
    agent.other_h_hat = agent.self.h;
    agent.binding = ModelBinding::self_as_other;
    return agent;
}

/// Sender: argmin over candidate signals of the 0/1 mismatch between the
/// intention and the modelled interpretation.  The actual receiver is not
/// an input, so there is no way to peek at the real interpretation.
inline SearchResult<int> sender_select_action(const CommAgent& agent, int intention,
                                              const std::vector<int>& candidate_signals,
                                              const SearchBudget& budget) {
    if (candidate_signals.empty()) {
        throw invalid_input_error("sender_select_action: empty candidate set");
    }
    DiscreteSpace<int> space{candidate_signals};
    return argmin_exhaustive(space, [&](int signal) {
        return mismatch(intention, agent.other_h_hat.at(static_cast<std::size_t>(signal)));
    }, budget);
}

/// Receiver: argmin over intentions of the mismatch between the observed
/// signal and the modelled production of that intention.
inline SearchResult<int> receiver_infer_intention(const CommAgent& agent, int observed_signal,
                                                  const std::vector<int>& intention_alphabet,
                                                  const SearchBudget& budget) {
    if (intention_alphabet.empty()) {
        throw invalid_input_error("receiver_infer_intention: empty alphabet");
    }
    DiscreteSpace<int> space{intention_alphabet};
    return argmin_exhaustive(space, [&](int intention) {
        return mismatch(observed_signal, agent.other_g_hat.at(static_cast<std::size_t>(intention)));
    }, budget);
}

struct CommEpisode {
    int intention_sent = 0;
    int signal_sent = 0;
    int signal_received = 0;
    int interpretation = 0;
    bool success = false;  // interpretation == intention_sent
    std::size_t sender_search_evals = 0;
    std::size_t receiver_search_evals = 0;
};

/// One full episode: sender selects, the channel (possibly) corrupts, the
/// receiver infers.  Deterministic given the channel seed.
inline CommEpisode run_episode(const CommAgent& sender, const CommAgent& receiver,
                               const WorldTransform& channel, int intention,
                               const SearchBudget& budget) {
    const int alphabet_size = channel.actions.count;
    std::vector<int> alphabet(static_cast<std::size_t>(alphabet_size));
    for (int i = 0; i < alphabet_size; ++i) alphabet[static_cast<std::size_t>(i)] = i;

    CommEpisode episode;
    episode.intention_sent = intention;

    const auto selection = sender_select_action(sender, intention, alphabet, budget);
    episode.signal_sent = selection.best_candidate;
    episode.sender_search_evals = selection.evaluations;

    const WorldState after = step(channel, channel.initial,
                                  static_cast<double>(episode.signal_sent));
    episode.signal_received = static_cast<int>(observe(channel, after).at("received"));

    const auto inference =
        receiver_infer_intention(receiver, episode.signal_received, alphabet, budget);
    episode.interpretation = inference.best_candidate;
    episode.receiver_search_evals = inference.evaluations;
    episode.success = episode.interpretation == episode.intention_sent;
    return episode;
}

/// Exact round-trip accuracy by enumerating every (intention, channel
/// outcome) pair of the uniform-substitution channel.  Used as the oracle
/// against batched Monte-Carlo runs.
inline double enumerate_round_trip_accuracy(const CommAgent& sender, const CommAgent& receiver,
                                            int alphabet_size, double substitution_prob,
                                            const SearchBudget& budget) {
    std::vector<int> alphabet(static_cast<std::size_t>(alphabet_size));
    for (int i = 0; i < alphabet_size; ++i) alphabet[static_cast<std::size_t>(i)] = i;
    double accuracy = 0.0;
    for (int intention : alphabet) {
        const int sent = sender_select_action(sender, intention, alphabet, budget).best_candidate;
        for (int received : alphabet) {
            const double prob =
                received == sent ? 1.0 - substitution_prob
                                 : substitution_prob / static_cast<double>(alphabet_size - 1);
            if (prob == 0.0) continue;
            const int decoded =
                receiver_infer_intention(receiver, received, alphabet, budget).best_candidate;
            if (decoded == intention) accuracy += prob;
        }
    }
    return accuracy / static_cast<double>(alphabet_size);
}

}  // namespace pct
