#pragma once

// Powers-style hierarchical perceptual control: the basic control unit
// with memory and the four switch modes, strict-layer hierarchy wiring
// with one-tick reference latency, and E.-coli reorganisation.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pct/errors.hpp"
#include "pct/motivation.hpp"

namespace pct {

enum class SwitchPosition { vertical, non_vertical };

enum class UnitMode { control, passive_observation, automatic, imagination };

// Mode is a pure function of the two switch positions (the a/b memory
// switch and the c/d perceptual switch).
struct SwitchState {
    SwitchPosition memory_switch = SwitchPosition::vertical;
    SwitchPosition perceptual_switch = SwitchPosition::vertical;

    UnitMode mode() const {
        const bool mem_v = memory_switch == SwitchPosition::vertical;
        const bool per_v = perceptual_switch == SwitchPosition::vertical;
        if (mem_v && per_v) return UnitMode::control;
        if (!mem_v && per_v) return UnitMode::passive_observation;
        if (mem_v && !per_v) return UnitMode::automatic;
        return UnitMode::imagination;
    }
};

/// Reference signals are recordings of past perceptual signals, keyed by
/// a discrete address.  Absent addresses are a defined miss.
struct MemoryStore {
    std::map<int, double> entries;

    void put(int address, double value) { entries[address] = value; }
    std::optional<double> get(int address) const {
        auto it = entries.find(address);
        return it != entries.end() ? std::optional<double>(it->second) : std::nullopt;
    }
};

struct MemoryAddress {
    int value = 0;
};

// Either a reference value handed down from above or an address used to
// retrieve one from the unit's own memory.
using UpperInput = std::variant<double, MemoryAddress>;

struct PerceptualControlUnit {
    int id = 0;
    std::string level_label;  // one of Powers' nine orders, informational
    double reference = 0.0;
    double perceptual = 0.0;
    double error = 0.0;
    double output = 0.0;
    double output_gain = 1.0;
    bool integrating_output = false;     // accumulate gain*e*dt instead of gain*e
    double perceptual_smoothing = 1.0;   // EMA coefficient; 1 = no smoothing
    std::vector<double> input_weights;   // combine lower-level perceptions
    SwitchState switches;
    MemoryStore memory;
    std::optional<int> imagination_address;  // used when stepped inside a hierarchy
};

struct UnitStepResult {
    double output = 0.0;
    std::optional<double> upward_perception;
};

/// One tick of a unit under its current switch mode.
///  control:  p from weighted lower perceptions, e = r - p, output = gain*e, p up.
///  passive:  p computed and propagated, output forced to 0.
///  automatic: control runs, nothing propagated upward.
///  imagination: memory supplies the reference and it is routed straight
///  back up; no output, so the world is never touched.
inline UnitStepResult unit_step(PerceptualControlUnit& unit, std::span<const double> lower,
                                const UpperInput& upper, double dt) {
    if (!(dt > 0.0)) {
        throw invalid_input_error("unit_step: dt must be positive");
    }
    const UnitMode mode = unit.switches.mode();

    if (mode == UnitMode::imagination) {
        const auto* address = std::get_if<MemoryAddress>(&upper);
        if (address == nullptr) {
            throw invalid_input_error("unit_step: imagination mode needs a memory address");
        }
        const auto recalled = unit.memory.get(address->value);
        if (!recalled) {
            throw memory_miss_error("unit_step: no memory at the requested address");
        }
        unit.reference = *recalled;
        unit.perceptual = *recalled;  // imagined perception
        unit.error = 0.0;
        unit.output = 0.0;
        return {0.0, *recalled};
    }

    if (const auto* address = std::get_if<MemoryAddress>(&upper)) {
        const auto recalled = unit.memory.get(address->value);
        if (!recalled) {
            throw memory_miss_error("unit_step: no memory at the requested address");
        }
        unit.reference = *recalled;
    } else {
        unit.reference = std::get<double>(upper);
    }

    if (lower.size() != unit.input_weights.size()) {
        throw invalid_input_error("unit_step: lower perception dimension mismatch");
    }
    double raw = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        raw += unit.input_weights[i] * lower[i];
    }
    unit.perceptual += unit.perceptual_smoothing * (raw - unit.perceptual);
    unit.error = unit.reference - unit.perceptual;

    switch (mode) {
        case UnitMode::control:
        case UnitMode::automatic: {
            if (unit.integrating_output) {
                unit.output += unit.output_gain * unit.error * dt;
            } else {
                unit.output = unit.output_gain * unit.error;
            }
            std::optional<double> upward;
            if (mode == UnitMode::control) upward = unit.perceptual;
            return {unit.output, upward};
        }
        case UnitMode::passive_observation:
            unit.output = 0.0;
            return {0.0, unit.perceptual};
        default:
            throw invalid_input_error("unit_step: unreachable mode");
    }
}

inline void memory_put(PerceptualControlUnit& unit, int address, double value) {
    unit.memory.put(address, value);
}

inline std::optional<double> memory_get(const PerceptualControlUnit& unit, int address) {
    return unit.memory.get(address);
}

// Weight matrix wiring level-(k+1) outputs down to level-k references:
// down_wiring[k][i][j] scales unit j of level k+1 into the reference of
// unit i of level k.
using WiringMatrix = std::vector<std::vector<double>>;

struct Hierarchy {
    std::vector<std::vector<PerceptualControlUnit>> levels;  // index 0 = lowest
    std::vector<WiringMatrix> down_wiring;                   // size levels.size()-1
    std::vector<double> top_references;
    std::vector<Need> needs;  // when non-empty, drives intrinsic error

    // References computed on the previous tick's down pass; applied at the
    // start of the next tick (one-tick latency).
    std::vector<std::vector<double>> pending_references;
    // Upward perception stream from the last step, per level; automatic-
    // mode units leave their slot empty.
    std::vector<std::vector<std::optional<double>>> last_upward;

    double intrinsic_error() const {
        if (!needs.empty()) return intrinsic_error_from_needs(needs);
        double total = 0.0;
        for (const auto& level : levels) {
            for (const auto& unit : level) {
                total += unit.error * unit.error;
            }
        }
        return total;
    }
};

inline void validate_hierarchy(const Hierarchy& h) {
    if (h.levels.empty()) {
        throw invalid_input_error("hierarchy: no levels");
    }
    if (h.down_wiring.size() + 1 != h.levels.size()) {
        throw invalid_input_error("hierarchy: wiring count must be levels-1");
    }
    for (std::size_t k = 0; k + 1 < h.levels.size(); ++k) {
        if (h.down_wiring[k].size() != h.levels[k].size()) {
            throw invalid_input_error("hierarchy: wiring rows must match lower level size");
        }
        for (const auto& row : h.down_wiring[k]) {
            if (row.size() != h.levels[k + 1].size()) {
                throw invalid_input_error("hierarchy: wiring columns must match upper level size");
            }
        }
    }
    if (h.top_references.size() != h.levels.back().size()) {
        throw invalid_input_error("hierarchy: top references must match top level size");
    }
}

/// One synchronous sweep: perceptions flow up through the levels, the
/// down pass computes next-tick references from this tick's outputs, and
/// the lowest level's outputs are returned as the action vector.
inline std::vector<double> hierarchy_step(Hierarchy& h, const std::vector<double>& observation,
                                          double dt) {
    validate_hierarchy(h);
    if (h.pending_references.empty()) {
        h.pending_references.resize(h.levels.size());
        for (std::size_t k = 0; k < h.levels.size(); ++k) {
            h.pending_references[k].assign(h.levels[k].size(), 0.0);
        }
    }
    h.pending_references.back() = h.top_references;
    h.last_upward.assign(h.levels.size(), {});

    std::vector<double> lower = observation;
    std::vector<std::vector<double>> outputs(h.levels.size());
    for (std::size_t k = 0; k < h.levels.size(); ++k) {
        auto& level = h.levels[k];
        std::vector<double> upward_values(level.size(), 0.0);
        h.last_upward[k].assign(level.size(), std::nullopt);
        outputs[k].resize(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            PerceptualControlUnit& unit = level[i];
            UpperInput upper = h.pending_references[k][i];
            if (unit.switches.mode() == UnitMode::imagination) {
                if (!unit.imagination_address) {
                    throw memory_miss_error("hierarchy_step: imagination unit without address");
                }
                upper = MemoryAddress{*unit.imagination_address};
            }
            const UnitStepResult result = unit_step(unit, lower, upper, dt);
            outputs[k][i] = result.output;
            h.last_upward[k][i] = result.upward_perception;
            upward_values[i] = result.upward_perception.value_or(0.0);
        }
        lower = std::move(upward_values);
    }

    // Down pass: level-k references for the next tick from level-(k+1)
    // outputs computed this tick.
    for (std::size_t k = 0; k + 1 < h.levels.size(); ++k) {
        for (std::size_t i = 0; i < h.levels[k].size(); ++i) {
            double ref = 0.0;
            for (std::size_t j = 0; j < h.levels[k + 1].size(); ++j) {
                ref += h.down_wiring[k][i][j] * outputs[k + 1][j];
            }
            h.pending_references[k][i] = ref;
        }
    }
    return outputs.front();
}

// --- reorganisation -------------------------------------------------------

struct ReorganizeState {
    bool has_baseline = false;
    double baseline_error = std::numeric_limits<double>::max();
    std::vector<double> accepted_errors;
};

namespace detail {

// Box-Muller from explicit mt19937_64 draws; fully pinned by the standard.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace detail

/// One E.-coli reorganisation step: perturb every output gain and input
/// weight by zero-mean noise, evaluate mean intrinsic error over the
/// caller's window (the `evaluate` callable runs the rollout), keep the
/// perturbation iff the error strictly decreased.  Returns whether the
/// candidate was accepted.
template <typename EvalFn>
bool reorganize_step(Hierarchy& h, EvalFn&& evaluate, double perturb_scale, std::mt19937_64& rng,
                     ReorganizeState& state) {
    if (!(perturb_scale > 0.0)) {
        throw invalid_input_error("reorganize_step: perturb_scale must be positive");
    }
    if (!state.has_baseline) {
        state.baseline_error = evaluate(h);
        state.has_baseline = true;
    }
    if (state.baseline_error == 0.0) {
        return false;  // nothing to improve, no perturbation at all
    }
    Hierarchy candidate = h;
    for (auto& level : candidate.levels) {
        for (auto& unit : level) {
            unit.output_gain += perturb_scale * detail::gaussian(rng);
            for (double& w : unit.input_weights) {
                w += perturb_scale * detail::gaussian(rng);
            }
        }
    }
    double candidate_error = evaluate(candidate);
    if (!std::isfinite(candidate_error)) {
        candidate_error = std::numeric_limits<double>::max();
    }
    if (candidate_error < state.baseline_error) {
        h = std::move(candidate);
        state.baseline_error = candidate_error;
        state.accepted_errors.push_back(candidate_error);
        return true;
    }
    return false;
}

}  // namespace pct
