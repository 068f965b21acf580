#pragma once

// Single-loop negative feedback control: discrete-time PID, closed-loop
// steady-state algebra, and a loop simulator that treats divergence as a
// reportable outcome rather than a failure.

#include <cmath>
#include <cstddef>
#include <vector>

#include "pct/errors.hpp"

namespace pct {

struct PidParams {
    double kp = 0.0;  // proportional gain
    double ki = 0.0;  // integral gain [1/time]
    double kd = 0.0;  // derivative gain [time]
};

struct PidState {
    double integral_accum = 0.0;
    double prev_error = 0.0;
    bool initialized = false;
};

struct PidOutput {
    double u = 0.0;
    PidState state;
};

/// One tick of the rectangle-rule / backward-difference PID law.
/// The derivative term is suppressed on the first tick after a reset.
inline PidOutput pid_step(const PidParams& params, PidState state, double e, double dt) {
    if (!std::isfinite(e)) {
        throw invalid_input_error("pid_step: non-finite error signal");
    }
    if (!(dt > 0.0)) {
        throw invalid_input_error("pid_step: dt must be positive");
    }
    state.integral_accum += e * dt;
    const double derivative = state.initialized ? (e - state.prev_error) / dt : 0.0;
    const double u = params.kp * e + params.ki * state.integral_accum + params.kd * derivative;
    state.prev_error = e;
    state.initialized = true;
    return {u, state};
}

// Per-tick loop signals, named after the classic block diagram:
// reference r, error e, control u, controlled output c, feedback b,
// disturbance d.  The comparator is subtraction, so e == r - b always.
struct LoopSignals {
    double r = 0.0;
    double e = 0.0;
    double u = 0.0;
    double c = 0.0;
    double b = 0.0;
    double d = 0.0;
};

struct ClosedLoopSpec {
    double g1 = 0.0;  // forward (controller) gain
    double g2 = 0.0;  // plant gain
    double h = 0.0;   // feedback gain
};

/// Steady-state C/R ratio of the static loop: g2*g1 / (1 + h*g2*g1).
inline double closed_loop_gain(const ClosedLoopSpec& spec) {
    const double denom = 1.0 + spec.h * spec.g2 * spec.g1;
    if (std::abs(denom) < 1e-12) {
        throw singular_loop_error("closed_loop_gain: 1 + h*g2*g1 is singular");
    }
    return spec.g2 * spec.g1 / denom;
}

/// Linear first-order plant: state' = pole*state + input_gain*input.
/// DC gain is input_gain / (1 - pole).
struct FirstOrderPlant {
    double state = 0.0;
    double pole = 0.0;       // in [0,1): the plant alone is stable
    double input_gain = 1.0;

    double step(double input) {
        state = pole * state + input_gain * input;
        return state;
    }
    double dc_gain() const { return input_gain / (1.0 - pole); }
};

struct SimulationResult {
    std::vector<LoopSignals> trace;
    bool diverged = false;
    std::size_t divergence_tick = 0;
};

inline constexpr double kDivergenceThreshold = 1e6;

/// Simulates the closed loop tick by tick.  The controller sees only the
/// error e = r - b; the disturbance d enters at the plant input and is
/// never visible to the PID path.  A signal exceeding the divergence
/// threshold (or going non-finite) ends the run with a divergence report;
/// positive-feedback experiments rely on this being a result, not a crash.
inline SimulationResult simulate_closed_loop(const PidParams& params, FirstOrderPlant plant,
                                             const std::vector<double>& r_series,
                                             const std::vector<double>& d_series, double dt,
                                             std::size_t ticks, double feedback_gain = 1.0) {
    if (r_series.size() < ticks || d_series.size() < ticks) {
        throw invalid_input_error("simulate_closed_loop: series shorter than tick count");
    }
    SimulationResult result;
    result.trace.reserve(ticks);
    PidState pid_state;
    for (std::size_t t = 0; t < ticks; ++t) {
        LoopSignals sig;
        sig.r = r_series[t];
        sig.d = d_series[t];
        sig.b = feedback_gain * plant.state;
        sig.e = sig.r - sig.b;
        if (!std::isfinite(sig.e) || std::abs(sig.e) > kDivergenceThreshold) {
            result.diverged = true;
            result.divergence_tick = t;
            result.trace.push_back(sig);
            break;
        }
        const PidOutput out = pid_step(params, pid_state, sig.e, dt);
        pid_state = out.state;
        sig.u = out.u;
        sig.c = plant.step(sig.u + sig.d);
        result.trace.push_back(sig);
        if (!std::isfinite(sig.c) || std::abs(sig.c) > kDivergenceThreshold ||
            std::abs(sig.u) > kDivergenceThreshold) {
            result.diverged = true;
            result.divergence_tick = t;
            break;
        }
    }
    return result;
}

}  // namespace pct
