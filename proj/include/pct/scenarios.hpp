#pragma once

// The bundled experiment suite.  Each scenario is a deterministic
// per-seed run that emits trace records; metrics are recomputed from the
// rounded records and checked against pinned expectations.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pct/communication.hpp"
#include "pct/config.hpp"
#include "pct/core_control.hpp"
#include "pct/forward_model.hpp"
#include "pct/hpct.hpp"
#include "pct/motivation.hpp"
#include "pct/search.hpp"
#include "pct/trace.hpp"
#include "pct/world.hpp"

namespace pct {

struct ScenarioDef {
    std::string name;
    std::string description;
    std::set<std::string> allowed_params;
    std::uint64_t default_seed_from = 1;
    std::uint64_t default_seed_to = 1;
    long default_ticks = 1;
    std::vector<MetricSpec> metrics;
    std::vector<Expectation> expectations;
    std::function<void(const ScenarioConfig&, std::uint64_t seed, long ticks, TraceSink&)>
        run_seed;
};

struct ScenarioResult {
    std::vector<TraceRecord> records;
    std::map<std::string, MetricStats> metrics;
    nlohmann::json summary;
    bool pass = false;
};

namespace detail {

// --- shared helpers --------------------------------------------------------

struct ThermostatParams {
    double ambient = 15.0;
    double leak = 0.1;
    double heater_gain = 0.5;
    double reference = 20.0;
    PidParams pid{0.5, 0.05, 0.0};
};

inline ThermostatParams thermostat_params(const nlohmann::json& params) {
    ThermostatParams p;
    p.ambient = param_number(params, "ambient", p.ambient);
    p.leak = param_number(params, "leak", p.leak);
    p.heater_gain = param_number(params, "heater_gain", p.heater_gain);
    p.reference = param_number(params, "reference", p.reference);
    p.pid.kp = param_number(params, "kp", p.pid.kp);
    p.pid.ki = param_number(params, "ki", p.pid.ki);
    p.pid.kd = param_number(params, "kd", p.pid.kd);
    return p;
}

/// PID against the thermostat world.  The controller path sees only the
/// observed temperature; the disturbance schedule lives inside the world.
inline void run_thermostat_loop(const ThermostatParams& p, DisturbanceSchedule disturbance,
                                long ticks, TraceSink& sink) {
    const WorldTransform world = make_thermostat(p.ambient, p.leak, p.heater_gain,
                                                 std::move(disturbance), p.ambient);
    WorldState state = world.initial;
    PidState pid_state;
    bool diverged = false;
    long divergence_tick = 0;
    for (long t = 0; t < ticks; ++t) {
        const double temp = observe(world, state).at("temperature");
        const double e = p.reference - temp;
        if (!std::isfinite(e) || std::abs(e) > kDivergenceThreshold) {
            diverged = true;
            divergence_tick = t;
            sink.emit(t, "abs_error", std::abs(e));
            break;
        }
        const PidOutput out = pid_step(p.pid, pid_state, e, 1.0);
        pid_state = out.state;
        state = step(world, state, out.u);
        sink.emit(t, "temperature", temp);
        sink.emit(t, "error", e);
        sink.emit(t, "control", out.u);
        sink.emit(t, "abs_error", std::abs(e));
    }
    sink.emit(ticks, "diverged", diverged ? 1.0 : 0.0);
    if (diverged) sink.emit(ticks, "divergence_tick", static_cast<double>(divergence_tick));
}

/// The bundled landscape: local minimum 2.0 at index 20, global minimum
/// 0.5 at index 70, with a barrier between the two basins.
inline std::vector<double> bundled_landscape() {
    std::vector<double> table(100);
    for (int i = 0; i < 100; ++i) {
        const double left = 2.0 + 0.5 * std::abs(i - 20);
        const double right = 0.5 + 0.5 * std::abs(i - 70);
        table[static_cast<std::size_t>(i)] = std::min(left, right);
    }
    return table;
}

inline CommAgent identity_agent(int alphabet_size) {
    CommAgent agent;
    agent.self.g.resize(static_cast<std::size_t>(alphabet_size));
    agent.self.h.resize(static_cast<std::size_t>(alphabet_size));
    for (int i = 0; i < alphabet_size; ++i) {
        agent.self.g[static_cast<std::size_t>(i)] = i;
        agent.self.h[static_cast<std::size_t>(i)] = i;
    }
    return bind_self_as_other(std::move(agent));
}

// Independent minimum-distance scan used as the oracle for the
// analysis-by-synthesis agreement scenario.  Deliberately not routed
// through the search module.
inline int linear_scan_min_distance(const std::vector<double>& outputs, double observed) {
    int best = 0;
    double best_err = mismatch(observed, outputs[0]);
    for (int i = 1; i < static_cast<int>(outputs.size()); ++i) {
        const double err = mismatch(observed, outputs[static_cast<std::size_t>(i)]);
        if (err < best_err) {
            best = i;
            best_err = err;
        }
    }
    return best;
}

// --- per-scenario runners --------------------------------------------------

inline void run_thermostat_tracking(const ScenarioConfig& config, std::uint64_t, long ticks,
                                    TraceSink& sink) {
    run_thermostat_loop(thermostat_params(config.params), no_disturbance(), ticks, sink);
}

inline void run_disturbance_rejection(const ScenarioConfig& config, std::uint64_t, long ticks,
                                      TraceSink& sink) {
    const auto p = thermostat_params(config.params);
    const long onset = param_integer(config.params, "disturbance_onset", ticks / 2);
    const double magnitude = param_number(config.params, "disturbance_magnitude", 5.0);
    run_thermostat_loop(p, step_disturbance(onset, magnitude), ticks, sink);
}

inline void run_positive_feedback(const ScenarioConfig& config, std::uint64_t, long ticks,
                                  TraceSink& sink) {
    auto p = thermostat_params(config.params);
    p.pid.kp = -std::abs(p.pid.kp);  // deliberate wrong sign
    const long onset = param_integer(config.params, "disturbance_onset", ticks / 2);
    const double magnitude = param_number(config.params, "disturbance_magnitude", 5.0);
    run_thermostat_loop(p, step_disturbance(onset, magnitude), ticks, sink);
}

inline void run_light_switch(const ScenarioConfig& config, std::uint64_t seed, long,
                             TraceSink& sink) {
    const int n = static_cast<int>(param_integer(config.params, "n_switches", 8));
    const WorldTransform world = make_light_switch(n, seed);
    WorldState state = world.initial;
    DiscreteSpace<int> space;
    for (int i = 0; i < n; ++i) space.candidates.push_back(i);
    const auto result = argmin_random(
        space,
        [&](int switch_index) {
            state = step(world, state, static_cast<double>(switch_index));
            return observe(world, state).at("lit") > 0.0 ? 0.0 : 1.0;
        },
        SearchBudget{static_cast<std::size_t>(n), 0.0},
        seed * 0x9E3779B97F4A7C15ull + 1);  // decouple from the world's target draw
    sink.emit(0, "trials", static_cast<double>(result.evaluations));
    sink.emit(0, "found", result.converged ? 1.0 : 0.0);
}

inline void run_plan_vs_greedy(const ScenarioConfig& config, std::uint64_t, long ticks,
                               TraceSink& sink) {
    std::vector<double> table =
        param_number_list(config.params, "error_table", bundled_landscape());
    const int start = static_cast<int>(param_integer(config.params, "start_position", 10));
    const int size = static_cast<int>(table.size());

    // Greedy real-time descent: probe the neighbours with real moves and
    // stay only when the error improves.
    {
        WorldTransform world = make_landscape(table, start);
        WorldState state = world.initial;
        for (long t = 0; t < ticks; ++t) {
            const double here = observe(world, state).at("error");
            WorldState right = step(world, state, 2.0);
            if (observe(world, right).at("error") < here) {
                state = std::move(right);
                continue;
            }
            WorldState back = step(world, right, 0.0);
            WorldState left = step(world, back, 0.0);
            if (observe(world, left).at("error") < here) {
                state = std::move(left);
                continue;
            }
            state = step(world, left, 2.0);  // return to the starting cell
            break;
        }
        sink.emit(0, "greedy_final_error", observe(world, state).at("error"));
        sink.emit(0, "greedy_final_position", observe(world, state).at("position"));
    }

    // Forward-model planning: search the table model, never the world.
    {
        WorldTransform world = make_landscape(table, start);
        WorldState state = world.initial;
        TabularModel<int, double> model;
        for (int i = 0; i < size; ++i) {
            model.table[i] = table[static_cast<std::size_t>(i)];
        }
        model.fitted_from = table.size();
        DiscreteSpace<int> positions;
        for (int i = 0; i < size; ++i) positions.candidates.push_back(i);

        const long tick_before = state.tick;
        const auto plan = plan_with_forward_model(model, 0.0, positions,
                                                  SearchBudget{table.size(), 0.0});
        sink.emit(0, "planning_world_steps", static_cast<double>(state.tick - tick_before));

        // Execute the planned target with real moves.
        int position = static_cast<int>(observe(world, state).at("position"));
        while (position != plan.best_candidate) {
            state = step(world, state, position < plan.best_candidate ? 2.0 : 0.0);
            position = static_cast<int>(observe(world, state).at("position"));
        }
        sink.emit(0, "planned_final_error", observe(world, state).at("error"));
        sink.emit(0, "planned_final_position", observe(world, state).at("position"));
    }
}

inline void run_hpct_modes(const ScenarioConfig&, std::uint64_t, long, TraceSink& sink) {
    // Fig.-style mode table: both vertical -> control, perceptual only ->
    // passive observation, memory only -> automatic, neither -> imagination.
    bool table_ok = true;
    auto expect_mode = [&table_ok](SwitchPosition mem, SwitchPosition per, UnitMode expected) {
        if (SwitchState{mem, per}.mode() != expected) table_ok = false;
    };
    expect_mode(SwitchPosition::vertical, SwitchPosition::vertical, UnitMode::control);
    expect_mode(SwitchPosition::non_vertical, SwitchPosition::vertical,
                UnitMode::passive_observation);
    expect_mode(SwitchPosition::vertical, SwitchPosition::non_vertical, UnitMode::automatic);
    expect_mode(SwitchPosition::non_vertical, SwitchPosition::non_vertical,
                UnitMode::imagination);
    sink.emit(0, "mode_table_ok", table_ok ? 1.0 : 0.0);

    // Imagination never touches the world: the agent loop only actuates
    // when the unit is outside imagination mode.
    {
        const WorldTransform world = make_thermostat(15.0, 0.1, 0.5);
        WorldState state = world.initial;
        const std::uint64_t hash_before = hash_world_state(state);
        PerceptualControlUnit unit;
        unit.switches = {SwitchPosition::non_vertical, SwitchPosition::non_vertical};
        unit.memory.put(0, 4.0);
        double last_upward = 0.0;
        for (int t = 0; t < 100; ++t) {
            const auto result = unit_step(unit, {}, MemoryAddress{0}, 1.0);
            last_upward = result.upward_perception.value_or(0.0);
            if (unit.switches.mode() != UnitMode::imagination) {
                state = step(world, state, result.output);
            }
        }
        sink.emit(0, "imagination_world_unchanged",
                  hash_world_state(state) == hash_before ? 1.0 : 0.0);
        sink.emit(0, "imagination_upward", last_upward);
    }

    // Passive observation perceives but never acts.
    {
        PerceptualControlUnit unit;
        unit.input_weights = {1.0};
        unit.switches = {SwitchPosition::non_vertical, SwitchPosition::vertical};
        bool zero_output = true;
        for (int t = 0; t < 50; ++t) {
            const double lower[] = {static_cast<double>(t) * 0.3};
            const auto result = unit_step(unit, lower, 10.0, 1.0);
            if (result.output != 0.0) zero_output = false;
        }
        sink.emit(0, "passive_zero_output", zero_output ? 1.0 : 0.0);
    }

    // Automatic mode controls without awareness: no upward perception
    // while error on a trackable target still falls.
    {
        const WorldTransform world = make_thermostat(15.0, 0.1, 0.5);
        WorldState state = world.initial;
        PerceptualControlUnit unit;
        unit.input_weights = {1.0};
        unit.output_gain = 0.05;
        unit.integrating_output = true;  // no steady-state offset
        unit.switches = {SwitchPosition::vertical, SwitchPosition::non_vertical};
        bool upward_empty = true;
        double first_abs_error = 0.0;
        double last_abs_error = 0.0;
        for (int t = 0; t < 300; ++t) {
            const double lower[] = {observe(world, state).at("temperature")};
            const auto result = unit_step(unit, lower, 20.0, 1.0);
            if (result.upward_perception.has_value()) upward_empty = false;
            if (t == 0) first_abs_error = std::abs(unit.error);
            last_abs_error = std::abs(unit.error);
            state = step(world, state, result.output);
        }
        sink.emit(0, "automatic_upward_empty", upward_empty ? 1.0 : 0.0);
        sink.emit(0, "automatic_error_decreases",
                  last_abs_error < 0.1 * first_abs_error ? 1.0 : 0.0);
    }
}

/// Two-level cascade on the thermostat: the upper unit controls a
/// smoothed (windowed) temperature with an integrating output that sets
/// the lower unit's reference; the lower unit drives the heater.
inline Hierarchy make_cascade_hierarchy(double top_reference) {
    Hierarchy h;
    PerceptualControlUnit lower;
    lower.id = 0;
    lower.level_label = "intensity";
    lower.input_weights = {1.0};
    lower.output_gain = 2.0;
    PerceptualControlUnit upper;
    upper.id = 1;
    upper.level_label = "sensation";
    upper.input_weights = {1.0};
    upper.output_gain = 0.08;
    upper.integrating_output = true;
    upper.perceptual_smoothing = 0.2;
    h.levels = {{lower}, {upper}};
    h.down_wiring = {{{1.0}}};
    h.top_references = {top_reference};
    return h;
}

inline void run_hpct_cascade(const ScenarioConfig& config, std::uint64_t, long ticks,
                             TraceSink& sink) {
    const double reference = param_number(config.params, "reference", 20.0);
    const WorldTransform world = make_thermostat(15.0, 0.1, 0.5);
    WorldState state = world.initial;
    Hierarchy h = make_cascade_hierarchy(reference);
    for (long t = 0; t < ticks; ++t) {
        const std::vector<double> obs = {observe(world, state).at("temperature")};
        const auto actions = hierarchy_step(h, obs, 1.0);
        state = step(world, state, actions[0]);
        sink.emit(t, "window_avg_abs_error", std::abs(h.levels[1][0].error));
        sink.emit(t, "temperature", obs[0]);
    }
}

inline void run_reorganisation_recovery(const ScenarioConfig& config, std::uint64_t seed, long,
                                        TraceSink& sink) {
    const long eval_window = param_integer(config.params, "eval_window", 30);
    const long max_steps = param_integer(config.params, "max_steps", 500);
    const double perturb_scale = param_number(config.params, "perturb_scale", 0.5);
    const double reference = param_number(config.params, "reference", 20.0);

    auto make_hierarchy = [&](double gain) {
        Hierarchy h;
        PerceptualControlUnit unit;
        unit.input_weights = {1.0};
        unit.output_gain = gain;
        h.levels = {{unit}};
        h.top_references = {reference};
        return h;
    };

    // Mean squared loop error over a fresh fixed-start rollout; divergent
    // rollouts count as a very large (finite) error.
    auto evaluate = [&](const Hierarchy& h) {
        Hierarchy rollout = h;
        const WorldTransform world = make_thermostat(15.0, 0.1, 0.5);
        WorldState state = world.initial;
        double total = 0.0;
        for (long t = 0; t < eval_window; ++t) {
            const double temp = observe(world, state).at("temperature");
            if (!std::isfinite(temp) || std::abs(temp) > 1e6) {
                return 1e18;
            }
            const auto actions = hierarchy_step(rollout, {temp}, 1.0);
            total += rollout.intrinsic_error();
            if (!std::isfinite(actions[0]) || std::abs(actions[0]) > 1e8) {
                return 1e18;
            }
            state = step(world, state, actions[0]);
        }
        return total / static_cast<double>(eval_window);
    };

    Hierarchy h = make_hierarchy(-1.0);  // sign-flipped start
    std::mt19937_64 rng(seed);
    ReorganizeState reorg;
    const double initial_error = evaluate(h);
    reorg.baseline_error = initial_error;
    reorg.has_baseline = true;

    bool recovered = false;
    long steps_used = max_steps;
    for (long s = 0; s < max_steps; ++s) {
        reorganize_step(h, evaluate, perturb_scale, rng, reorg);
        if (reorg.baseline_error < 0.1 * initial_error) {
            recovered = true;
            steps_used = s + 1;
            break;
        }
    }
    bool monotone = true;
    for (std::size_t i = 1; i < reorg.accepted_errors.size(); ++i) {
        if (!(reorg.accepted_errors[i] < reorg.accepted_errors[i - 1])) monotone = false;
    }
    sink.emit(0, "recovered", recovered ? 1.0 : 0.0);
    sink.emit(0, "steps_used", static_cast<double>(steps_used));
    sink.emit(0, "monotone_accepted", monotone ? 1.0 : 0.0);
    sink.emit(0, "final_gain", h.levels[0][0].output_gain);
}

inline void run_infer_cause_noisy(const ScenarioConfig& config, std::uint64_t seed, long,
                                  TraceSink& sink) {
    const long instances = param_integer(config.params, "instances", 1000);
    const long max_size = param_integer(config.params, "max_size", 64);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    long agreements = 0;
    for (long n = 0; n < instances; ++n) {
        const int size = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_size - 1));
        std::vector<double> outputs(static_cast<std::size_t>(size));
        TabularModel<int, double> model;
        DiscreteSpace<int> candidates;
        for (int i = 0; i < size; ++i) {
            outputs[static_cast<std::size_t>(i)] = uniform() * 10.0;
            model.table[i] = outputs[static_cast<std::size_t>(i)];
            candidates.candidates.push_back(i);
        }
        const int true_cause = static_cast<int>(rng() % static_cast<std::uint64_t>(size));
        const double observed =
            outputs[static_cast<std::size_t>(true_cause)] + (uniform() - 0.5) * 0.2;

        const auto inferred = infer_cause(model, observed, candidates,
                                          SearchBudget{static_cast<std::size_t>(size), 0.0});
        const int oracle = linear_scan_min_distance(outputs, observed);
        if (inferred.best_candidate == oracle) ++agreements;
    }
    sink.emit(0, "agreement", static_cast<double>(agreements) / static_cast<double>(instances));
}

inline void run_comm_self_as_other(const ScenarioConfig& config, std::uint64_t, long,
                                   TraceSink& sink) {
    const auto alphabets = param_number_list(config.params, "alphabet_sizes", {2.0, 4.0, 8.0});
    for (double k_raw : alphabets) {
        const int k = static_cast<int>(k_raw);
        const CommAgent agent = identity_agent(k);
        const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
        int successes = 0;
        for (int intention = 0; intention < k; ++intention) {
            const WorldTransform channel = make_channel(k, 0.0, 0);
            const auto episode = run_episode(agent, agent, channel, intention, budget);
            if (episode.success) ++successes;
        }
        sink.emit(k, "accuracy", static_cast<double>(successes) / static_cast<double>(k));
    }
}

inline void run_comm_noise_sweep(const ScenarioConfig& config, std::uint64_t, long,
                                 TraceSink& sink) {
    const int k = static_cast<int>(param_integer(config.params, "alphabet_size", 4));
    const auto probs =
        param_number_list(config.params, "substitution_probs", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    const auto batch_probs = param_number_list(config.params, "batch_probs", {0.1, 0.25});
    const long episodes = param_integer(config.params, "episodes", 10000);
    const CommAgent agent = identity_agent(k);
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};

    bool monotone = true;
    double previous = 1.0;
    long tick = 0;
    for (double p : probs) {
        const double oracle = enumerate_round_trip_accuracy(agent, agent, k, p, budget);
        sink.emit(tick, "oracle_accuracy", oracle);
        sink.emit(tick, "substitution_prob", p);
        if (oracle > previous + 1e-12) monotone = false;
        previous = oracle;
        ++tick;
    }
    sink.emit(tick, "monotone", monotone ? 1.0 : 0.0);

    for (double p : batch_probs) {
        const double oracle = enumerate_round_trip_accuracy(agent, agent, k, p, budget);
        long successes = 0;
        for (long e = 0; e < episodes; ++e) {
            const WorldTransform channel = make_channel(k, p, static_cast<std::uint64_t>(e) + 1);
            const int intention = static_cast<int>(e % k);
            if (run_episode(agent, agent, channel, intention, budget).success) ++successes;
        }
        const double empirical =
            static_cast<double>(successes) / static_cast<double>(episodes);
        const double stderr3 =
            3.0 * std::sqrt(std::max(oracle * (1.0 - oracle), 1e-12) /
                            static_cast<double>(episodes));
        ++tick;
        sink.emit(tick, "batch_prob", p);
        sink.emit(tick, "empirical_accuracy", empirical);
        sink.emit(tick, "batch_oracle_accuracy", oracle);
        sink.emit(tick, "within_3se", std::abs(empirical - oracle) <= stderr3 ? 1.0 : 0.0);
    }
}

inline void run_comm_model_mismatch(const ScenarioConfig& config, std::uint64_t, long,
                                    TraceSink& sink) {
    const int k = static_cast<int>(param_integer(config.params, "alphabet_size", 4));
    const double p = param_number(config.params, "substitution_prob", 0.0);
    const long shift = param_integer(config.params, "permutation_shift", 1);
    const CommAgent sender = identity_agent(k);
    CommAgent receiver = identity_agent(k);
    // Deliberately wrong model of the sender: a cyclic permutation of g.
    for (int i = 0; i < k; ++i) {
        receiver.other_g_hat[static_cast<std::size_t>(i)] =
            static_cast<int>((i + shift) % k);
    }
    const SearchBudget budget{static_cast<std::size_t>(k), 0.0};
    const double enumerated = enumerate_round_trip_accuracy(sender, receiver, k, p, budget);
    sink.emit(0, "enumerated_accuracy", enumerated);

    long successes = 0;
    const long episodes = param_integer(config.params, "episodes", 1000);
    for (long e = 0; e < episodes; ++e) {
        const WorldTransform channel = make_channel(k, p, static_cast<std::uint64_t>(e) + 1);
        if (run_episode(sender, receiver, channel, static_cast<int>(e % k), budget).success) {
            ++successes;
        }
    }
    sink.emit(0, "empirical_accuracy",
              static_cast<double>(successes) / static_cast<double>(episodes));
}

inline void run_needs_driven_agent(const ScenarioConfig& config, std::uint64_t, long ticks,
                                   TraceSink& sink) {
    const double threshold = param_number(config.params, "activation_threshold", 0.1);
    const int k = static_cast<int>(param_integer(config.params, "alphabet_size", 4));
    EnthusiasmPolicy policy;
    policy.base_budget = static_cast<std::size_t>(k);
    policy.base_gain = 1.0;
    policy.arousal_coupling = 0.5;

    std::vector<Need> needs;
    Need energy;
    energy.name = "energy";
    energy.level = 1.0;
    energy.setpoint = 1.0;
    energy.depletion_rate = 0.0;
    energy.weight = 2.0;
    energy.desired_outcome = "request_food";
    needs.push_back(energy);
    const std::map<std::string, int> outcome_symbols = {{"request_food", 0}};

    // Phase 1: satiated.  No deficit, no desire, no intention, and hence
    // zero search evaluations anywhere in the stack.
    std::size_t evals_satiated = 0;
    for (long t = 0; t < ticks; ++t) {
        needs = update_needs(needs, {}, 1.0);
        const auto desires = derive_desires(needs, threshold);
        if (const auto intention = select_intention(desires)) {
            evals_satiated += enthusiasm_to_effort(policy, intention->urgency).budget;
        }
    }
    sink.emit(0, "satiated_search_evals", static_cast<double>(evals_satiated));

    // Phase 2: introduce a deficit; the intention drives a communication
    // episode requesting satisfaction from the provider agent.
    needs[0].level = 0.4;
    needs = update_needs(needs, {}, 1.0);
    const auto desires = derive_desires(needs, threshold);
    const auto intention = select_intention(desires);
    sink.emit(1, "deficit_triggered_intention", intention.has_value() ? 1.0 : 0.0);

    bool success = false;
    std::size_t episode_evals = 0;
    if (intention) {
        const CommAgent requester = identity_agent(k);
        const CommAgent provider = identity_agent(k);
        const auto effort = enthusiasm_to_effort(policy, intention->urgency);
        const WorldTransform channel = make_channel(k, 0.0, 7);
        const auto episode =
            run_episode(requester, provider, channel, outcome_symbols.at(intention->outcome),
                        SearchBudget{effort.budget, 0.0});
        success = episode.success;
        episode_evals = episode.sender_search_evals + episode.receiver_search_evals;
        if (success) {
            // The provider delivers exactly the deficit.
            needs = update_needs(needs, {{"energy", needs[0].deficit()}}, 1.0);
        }
    }
    sink.emit(1, "episode_success", success ? 1.0 : 0.0);
    sink.emit(1, "episode_search_evals", static_cast<double>(episode_evals));
    sink.emit(1, "post_satisfaction_deficit", needs[0].deficit());

    // The hierarchy's intrinsic error and the appraisal valence agree.
    Hierarchy h;
    PerceptualControlUnit unit;
    unit.input_weights = {1.0};
    h.levels = {{unit}};
    h.top_references = {0.0};
    h.needs = needs;
    std::vector<double> deficits;
    std::vector<double> weights;
    for (const Need& need : h.needs) {
        deficits.push_back(need.deficit());
        weights.push_back(need.weight);
    }
    const Appraisal appraisal = appraise(deficits, weights, 0, policy);
    sink.emit(1, "intrinsic_error_bridge_ok",
              h.intrinsic_error() == -appraisal.valence ? 1.0 : 0.0);
}

}  // namespace detail

inline const std::vector<ScenarioDef>& scenario_registry() {
    using Agg = MetricSpec::Agg;
    using Stat = Expectation::Stat;
    using Op = Expectation::Op;
    static const std::vector<ScenarioDef> registry = {
        {"thermostat_tracking",
         "PID loop tracks a temperature reference on the thermostat world",
         {"ambient", "leak", "heater_gain", "reference", "kp", "ki", "kd"},
         1, 1, 500,
         {{"final_abs_error", "abs_error", Agg::final_per_scope},
          {"diverged", "diverged", Agg::all}},
         {{"final_abs_error", Stat::max, Op::lt, 1e-3},
          {"diverged", Stat::max, Op::eq, 0.0}},
         detail::run_thermostat_tracking},
        {"disturbance_rejection",
         "integral action removes a constant step disturbance without measuring it",
         {"ambient", "leak", "heater_gain", "reference", "kp", "ki", "kd",
          "disturbance_onset", "disturbance_magnitude"},
         1, 1, 600,
         {{"final_abs_error", "abs_error", Agg::final_per_scope},
          {"diverged", "diverged", Agg::all}},
         {{"final_abs_error", Stat::max, Op::lt, 1e-3},
          {"diverged", Stat::max, Op::eq, 0.0}},
         detail::run_disturbance_rejection},
        {"positive_feedback_divergence",
         "flipping the sign of kp turns the loop into positive feedback",
         {"ambient", "leak", "heater_gain", "reference", "kp", "ki", "kd",
          "disturbance_onset", "disturbance_magnitude"},
         1, 20, 600,
         {{"diverged", "diverged", Agg::all}},
         {{"diverged", Stat::min, Op::eq, 1.0}},
         detail::run_positive_feedback},
        {"light_switch",
         "random search over unmarked switches; mean trials follow (n+1)/2",
         {"n_switches"},
         1, 10000, 1,
         {{"trials", "trials", Agg::all}, {"found", "found", Agg::all}},
         {{"trials", Stat::mean, Op::within, 4.5, 0.1},
          {"found", Stat::min, Op::eq, 1.0}},
         detail::run_light_switch},
        {"plan_vs_greedy",
         "forward-model planning reaches the global landscape minimum where greedy stalls",
         {"error_table", "start_position"},
         1, 1, 200,
         {{"greedy_final_error", "greedy_final_error", Agg::all},
          {"planned_final_error", "planned_final_error", Agg::all},
          {"planning_world_steps", "planning_world_steps", Agg::all}},
         {{"greedy_final_error", Stat::max, Op::eq, 2.0},
          {"planned_final_error", Stat::max, Op::eq, 0.5},
          {"planning_world_steps", Stat::max, Op::eq, 0.0}},
         detail::run_plan_vs_greedy},
        {"hpct_modes",
         "the four switch-mode behaviours of the perceptual control unit",
         {},
         1, 1, 100,
         {{"mode_table_ok", "mode_table_ok", Agg::all},
          {"imagination_world_unchanged", "imagination_world_unchanged", Agg::all},
          {"passive_zero_output", "passive_zero_output", Agg::all},
          {"automatic_upward_empty", "automatic_upward_empty", Agg::all},
          {"automatic_error_decreases", "automatic_error_decreases", Agg::all}},
         {{"mode_table_ok", Stat::min, Op::eq, 1.0},
          {"imagination_world_unchanged", Stat::min, Op::eq, 1.0},
          {"passive_zero_output", Stat::min, Op::eq, 1.0},
          {"automatic_upward_empty", Stat::min, Op::eq, 1.0},
          {"automatic_error_decreases", Stat::min, Op::eq, 1.0}},
         detail::run_hpct_modes},
        {"hpct_cascade",
         "two-level cascade: window-average temperature over an instantaneous heater loop",
         {"reference"},
         1, 1, 2000,
         {{"window_avg_abs_error", "window_avg_abs_error", Agg::final_per_scope}},
         {{"window_avg_abs_error", Stat::max, Op::lt, 1e-2}},
         detail::run_hpct_cascade},
        {"reorganisation_recovery",
         "E.-coli reorganisation recovers from a sign-flipped loop gain",
         {"eval_window", "max_steps", "perturb_scale", "reference"},
         1, 100, 1,
         {{"recovered", "recovered", Agg::all},
          {"monotone_accepted", "monotone_accepted", Agg::all},
          {"steps_used", "steps_used", Agg::all}},
         {{"recovered", Stat::mean, Op::ge, 0.95},
          {"monotone_accepted", Stat::min, Op::eq, 1.0}},
         detail::run_reorganisation_recovery},
        {"infer_cause_noisy",
         "analysis-by-synthesis equals an independent minimum-distance scan",
         {"instances", "max_size"},
         1, 1, 1,
         {{"agreement", "agreement", Agg::all}},
         {{"agreement", Stat::min, Op::eq, 1.0}},
         detail::run_infer_cause_noisy},
        {"comm_self_as_other",
         "identical self-as-other agents communicate perfectly over a noiseless channel",
         {"alphabet_sizes"},
         1, 1, 1,
         {{"accuracy", "accuracy", Agg::all}},
         {{"accuracy", Stat::min, Op::eq, 1.0}},
         detail::run_comm_self_as_other},
        {"comm_noise_sweep",
         "round-trip accuracy degrades monotonically with substitution noise",
         {"alphabet_size", "substitution_probs", "batch_probs", "episodes"},
         1, 1, 1,
         {{"monotone", "monotone", Agg::all},
          {"within_3se", "within_3se", Agg::all},
          {"oracle_accuracy", "oracle_accuracy", Agg::all},
          {"empirical_accuracy", "empirical_accuracy", Agg::all}},
         {{"monotone", Stat::min, Op::eq, 1.0},
          {"within_3se", Stat::min, Op::eq, 1.0}},
         detail::run_comm_noise_sweep},
        {"comm_model_mismatch",
         "a permuted model of the sender breaks round-trip accuracy, quantified by enumeration",
         {"alphabet_size", "substitution_prob", "permutation_shift", "episodes"},
         1, 1, 1,
         {{"enumerated_accuracy", "enumerated_accuracy", Agg::all},
          {"empirical_accuracy", "empirical_accuracy", Agg::all}},
         {{"enumerated_accuracy", Stat::max, Op::lt, 1.0},
          {"empirical_accuracy", Stat::max, Op::lt, 1.0}},
         detail::run_comm_model_mismatch},
        {"needs_driven_agent",
         "a needs deficit drives intention selection and a provider-directed episode",
         {"activation_threshold", "alphabet_size"},
         1, 1, 1000,
         {{"satiated_search_evals", "satiated_search_evals", Agg::all},
          {"deficit_triggered_intention", "deficit_triggered_intention", Agg::all},
          {"episode_success", "episode_success", Agg::all},
          {"post_satisfaction_deficit", "post_satisfaction_deficit", Agg::all},
          {"intrinsic_error_bridge_ok", "intrinsic_error_bridge_ok", Agg::all}},
         {{"satiated_search_evals", Stat::max, Op::eq, 0.0},
          {"deficit_triggered_intention", Stat::min, Op::eq, 1.0},
          {"episode_success", Stat::min, Op::eq, 1.0},
          {"post_satisfaction_deficit", Stat::max, Op::eq, 0.0},
          {"intrinsic_error_bridge_ok", Stat::min, Op::eq, 1.0}},
         detail::run_needs_driven_agent},
    };
    return registry;
}

inline const ScenarioDef& find_scenario(const std::string& name) {
    for (const ScenarioDef& def : scenario_registry()) {
        if (def.name == name) return def;
    }
    throw config_error("unknown scenario '" + name + "'");
}

inline ScenarioResult run_scenario(const ScenarioConfig& config) {
    const ScenarioDef& def = find_scenario(config.scenario);
    reject_unknown_keys(config.params, def.allowed_params, "params of " + def.name);

    const std::uint64_t seed_from = config.seeds_set ? config.seed_from : def.default_seed_from;
    const std::uint64_t seed_to = config.seeds_set ? config.seed_to : def.default_seed_to;
    const long ticks = config.ticks > 0 ? config.ticks : def.default_ticks;

    ScenarioResult result;
    for (std::uint64_t seed = seed_from; seed <= seed_to; ++seed) {
        TraceSink sink(result.records, "seed" + std::to_string(seed));
        def.run_seed(config, seed, ticks, sink);
    }
    result.metrics = compute_metrics(result.records, def.metrics);

    nlohmann::json metrics_json;
    for (const auto& [name, stats] : result.metrics) {
        metrics_json[name] = {{"mean", stats.mean},
                              {"stddev", stats.stddev},
                              {"min", stats.min},
                              {"max", stats.max},
                              {"count", stats.count}};
    }
    nlohmann::json checks = nlohmann::json::array();
    result.pass = true;
    for (const Expectation& expectation : def.expectations) {
        const bool ok = check_expectation(result.metrics, expectation);
        checks.push_back({{"expectation", expectation.describe()}, {"pass", ok}});
        if (!ok) result.pass = false;
    }
    result.summary = {{"scenario", def.name},
                      {"seed_count", seed_to - seed_from + 1},
                      {"metrics", metrics_json},
                      {"checks", checks},
                      {"pass", result.pass}};
    return result;
}

/// Writes trace CSV and summary JSON under out_dir, atomically.
inline void write_outputs(const ScenarioResult& result, const std::string& scenario,
                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_trace_csv(out_dir / (scenario + "_trace.csv"), result.records);
    const std::filesystem::path summary_path = out_dir / (scenario + "_summary.json");
    const std::filesystem::path tmp = summary_path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << result.summary.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, summary_path);
}

struct SweepRow {
    double value = 0.0;
    std::string metric;
    MetricStats stats;
    bool pass = false;
};

/// Runs the scenario once per value of the dotted parameter path (for
/// example "params.kp") and collects one row per (value, metric).
inline std::vector<SweepRow> sweep(ScenarioConfig config, const std::string& parameter_path,
                                   const std::vector<double>& values) {
    if (values.empty()) {
        throw config_error("sweep: empty value list");
    }
    std::vector<SweepRow> rows;
    for (double value : values) {
        nlohmann::json json = to_json(config);
        nlohmann::json* node = &json;
        std::string remaining = parameter_path;
        while (true) {
            const auto dot = remaining.find('.');
            const std::string key = remaining.substr(0, dot);
            if (dot == std::string::npos) {
                if (!node->is_object()) {
                    throw config_error("sweep: path '" + parameter_path + "' does not resolve");
                }
                (*node)[key] = value;
                break;
            }
            if (!node->is_object() || !node->contains(key)) {
                (*node)[key] = nlohmann::json::object();
            }
            node = &(*node)[key];
            remaining = remaining.substr(dot + 1);
        }
        const ScenarioResult result = run_scenario(parse_config(json));
        for (const auto& [metric, stats] : result.metrics) {
            rows.push_back({value, metric, stats, result.pass});
        }
    }
    return rows;
}

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "value,metric,mean,stddev,min,max,pass\n";
        for (const SweepRow& row : rows) {
            out << format_sig9(row.value) << ',' << row.metric << ',' << format_sig9(row.stats.mean)
                << ',' << format_sig9(row.stats.stddev) << ',' << format_sig9(row.stats.min) << ','
                << format_sig9(row.stats.max) << ',' << (row.pass ? 1 : 0) << '\n';
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pct
