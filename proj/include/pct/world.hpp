#pragma once

// The world-as-transform abstraction plus the built-in toy worlds:
// thermostat, unmarked light switches, an error landscape and a noisy
// symbol channel.  Every world is deterministic given its parameters,
// its seed and the action sequence.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pct/errors.hpp"

namespace pct {

using Observation = std::map<std::string, double>;

struct WorldState {
    std::map<std::string, double> values;
    long tick = 0;
};

/// FNV-1a over the state's names, values and tick.  Used by tests that
/// must prove imagination-mode planning leaves the world untouched.
inline std::uint64_t hash_world_state(const WorldState& state) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& [name, value] : state.values) {
        mix(name.data(), name.size());
        mix(&value, sizeof(value));
    }
    mix(&state.tick, sizeof(state.tick));
    return h;
}

struct ActionDomain {
    enum class Kind { discrete, continuous };
    Kind kind = Kind::continuous;
    int count = 0;       // discrete: actions are integers in [0, count)
    double low = 0.0;    // continuous bounds
    double high = 0.0;

    bool contains(double action) const {
        if (kind == Kind::discrete) {
            return action == std::floor(action) && action >= 0.0 &&
                   action < static_cast<double>(count);
        }
        return action >= low && action <= high;
    }
};

struct WorldTransform {
    ActionDomain actions;
    WorldState initial;
    std::function<WorldState(const WorldState&, double)> step_fn;
    std::function<Observation(const WorldState&)> observe_fn;
};

inline WorldState step(const WorldTransform& world, const WorldState& state, double action) {
    if (!world.actions.contains(action)) {
        throw invalid_action_error("step: action outside the world's action space");
    }
    WorldState next = world.step_fn(state, action);
    next.tick = state.tick + 1;
    return next;
}

inline Observation observe(const WorldTransform& world, const WorldState& state) {
    return world.observe_fn(state);
}

using DisturbanceSchedule = std::function<double(long tick)>;

inline DisturbanceSchedule no_disturbance() {
    return [](long) { return 0.0; };
}

/// Constant disturbance switched on from a given tick onward.
inline DisturbanceSchedule step_disturbance(long onset_tick, double magnitude) {
    return [onset_tick, magnitude](long tick) { return tick >= onset_tick ? magnitude : 0.0; };
}

/// temp' = temp + leak*(ambient - temp) + heater_gain*u + d
inline WorldTransform make_thermostat(double ambient, double leak, double heater_gain,
                                      DisturbanceSchedule disturbance = no_disturbance(),
                                      double initial_temp = 0.0) {
    if (!std::isfinite(ambient) || !std::isfinite(leak) || !std::isfinite(heater_gain)) {
        throw invalid_input_error("make_thermostat: parameters must be finite");
    }
    WorldTransform world;
    world.actions = {ActionDomain::Kind::continuous, 0, -1e9, 1e9};
    world.initial.values = {{"temperature", initial_temp}};
    world.step_fn = [ambient, leak, heater_gain, disturbance](const WorldState& s, double u) {
        WorldState next = s;
        const double temp = s.values.at("temperature");
        const double d = disturbance(s.tick + 1);
        next.values["temperature"] = temp + leak * (ambient - temp) + heater_gain * u + d;
        return next;
    };
    world.observe_fn = [](const WorldState& s) {
        return Observation{{"temperature", s.values.at("temperature")}};
    };
    return world;
}

/// n unmarked switches, one of which (chosen by seed) controls the light.
/// The controlling index is world state but never part of an observation.
inline WorldTransform make_light_switch(int n_switches, std::uint64_t seed) {
    if (n_switches < 2) {
        throw invalid_input_error("make_light_switch: need at least 2 switches");
    }
    std::mt19937_64 rng(seed);
    const auto target = static_cast<double>(rng() % static_cast<std::uint64_t>(n_switches));
    WorldTransform world;
    world.actions = {ActionDomain::Kind::discrete, n_switches, 0, 0};
    world.initial.values = {{"lit", 0.0}, {"target_index", target}};
    world.step_fn = [](const WorldState& s, double action) {
        WorldState next = s;
        next.values["lit"] = (action == s.values.at("target_index")) ? 1.0 : 0.0;
        return next;
    };
    world.observe_fn = [](const WorldState& s) {
        return Observation{{"lit", s.values.at("lit")}};
    };
    return world;
}

/// A 1-D error landscape over a discrete grid; actions move the position
/// by -1, 0 or +1 (encoded as 0, 1, 2) and the current table value is
/// observed alongside the position.
inline WorldTransform make_landscape(std::vector<double> error_table, int initial_position = 0) {
    if (error_table.empty()) {
        throw invalid_input_error("make_landscape: empty error table");
    }
    for (double v : error_table) {
        if (!std::isfinite(v)) {
            throw invalid_input_error("make_landscape: non-finite table entry");
        }
    }
    const auto size = static_cast<long>(error_table.size());
    if (initial_position < 0 || initial_position >= size) {
        throw invalid_input_error("make_landscape: initial position outside table");
    }
    WorldTransform world;
    world.actions = {ActionDomain::Kind::discrete, 3, 0, 0};
    world.initial.values = {{"position", static_cast<double>(initial_position)},
                            {"error", error_table[static_cast<std::size_t>(initial_position)]}};
    auto table = std::make_shared<std::vector<double>>(std::move(error_table));
    world.step_fn = [table, size](const WorldState& s, double action) {
        WorldState next = s;
        const long delta = static_cast<long>(action) - 1;
        long pos = static_cast<long>(s.values.at("position")) + delta;
        if (pos < 0) pos = 0;
        if (pos >= size) pos = size - 1;
        next.values["position"] = static_cast<double>(pos);
        next.values["error"] = (*table)[static_cast<std::size_t>(pos)];
        return next;
    };
    world.observe_fn = [](const WorldState& s) {
        return Observation{{"position", s.values.at("position")},
                           {"error", s.values.at("error")}};
    };
    return world;
}

/// Uniform-substitution symbol channel: a transmitted symbol arrives
/// unchanged with probability 1-p, otherwise it is replaced by one of the
/// other alphabet_size-1 symbols uniformly.  Noise draws are keyed on
/// (seed, tick), so replaying the same action sequence reproduces the
/// same corruption pattern.
inline WorldTransform make_channel(int alphabet_size, double substitution_prob,
                                   std::uint64_t seed) {
    if (alphabet_size < 2) {
        throw invalid_input_error("make_channel: alphabet size must be >= 2");
    }
    if (!(substitution_prob >= 0.0 && substitution_prob <= 1.0)) {
        throw invalid_input_error("make_channel: substitution probability outside [0,1]");
    }
    WorldTransform world;
    world.actions = {ActionDomain::Kind::discrete, alphabet_size, 0, 0};
    world.initial.values = {{"received", 0.0}};
    world.step_fn = [alphabet_size, substitution_prob, seed](const WorldState& s, double action) {
        WorldState next = s;
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(s.tick + 1));
        const double draw = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double received = action;
        if (draw < substitution_prob) {
            const auto offset = 1 + rng() % static_cast<std::uint64_t>(alphabet_size - 1);
            received = std::fmod(action + static_cast<double>(offset),
                                 static_cast<double>(alphabet_size));
        }
        next.values["received"] = received;
        return next;
    };
    world.observe_fn = [](const WorldState& s) {
        return Observation{{"received", s.values.at("received")}};
    };
    return world;
}

}  // namespace pct
