#pragma once

// Needs -> desires -> intentions, with valence/arousal appraisal and the
// enthusiasm-to-effort mapping (urgency scales both search budget and
// loop gain).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pct/errors.hpp"

namespace pct {

struct Need {
    std::string name;
    enum class Kind { physical, psychological } kind = Kind::physical;
    double level = 0.0;
    double setpoint = 0.0;
    double depletion_rate = 0.0;  // per-tick decay
    double weight = 1.0;          // importance, >= 0
    double min_level = 0.0;
    double max_level = 1e9;
    std::string desired_outcome;  // world/communication outcome when deficient

    double deficit() const { return setpoint - level; }
};

/// Weighted sum of squared deficits; the hierarchy's default intrinsic
/// error when needs are configured.
inline double intrinsic_error_from_needs(const std::vector<Need>& needs) {
    double total = 0.0;
    for (const Need& need : needs) {
        total += need.weight * need.deficit() * need.deficit();
    }
    return total;
}

/// Leaky-integrator need dynamics: constant depletion plus delivered
/// satisfaction, clamped to the need's bounds.
inline std::vector<Need> update_needs(std::vector<Need> needs,
                                      const std::map<std::string, double>& satisfaction,
                                      double dt) {
    if (!(dt > 0.0)) {
        throw invalid_input_error("update_needs: dt must be positive");
    }
    for (Need& need : needs) {
        double delta = 0.0;
        if (auto it = satisfaction.find(need.name); it != satisfaction.end()) {
            delta = it->second;
            if (!std::isfinite(delta)) {
                throw invalid_input_error("update_needs: non-finite satisfaction delta");
            }
        }
        need.level = std::clamp(need.level - need.depletion_rate * dt + delta, need.min_level,
                                need.max_level);
    }
    return needs;
}

struct Desire {
    std::string need_name;
    std::string outcome;
    double urgency = 0.0;  // weight * |deficit|
};

struct DesireSet {
    std::vector<Desire> active;  // sorted by urgency descending, name ascending on ties
};

inline DesireSet derive_desires(const std::vector<Need>& needs, double threshold) {
    DesireSet desires;
    for (const Need& need : needs) {
        if (std::abs(need.deficit()) > threshold) {
            desires.active.push_back({need.name, need.desired_outcome,
                                      need.weight * std::abs(need.deficit())});
        }
    }
    std::stable_sort(desires.active.begin(), desires.active.end(),
                     [](const Desire& a, const Desire& b) {
                         if (a.urgency != b.urgency) return a.urgency > b.urgency;
                         return a.need_name < b.need_name;
                     });
    return desires;
}

struct Intention {
    std::string need_name;
    std::string outcome;
    double urgency = 0.0;
};

/// Strict-max selection with lexicographic name tie-break; an empty
/// desire set yields no intention (the agent stays idle).
inline std::optional<Intention> select_intention(const DesireSet& desires) {
    if (desires.active.empty()) return std::nullopt;
    const Desire& top = desires.active.front();
    return Intention{top.need_name, top.outcome, top.urgency};
}

struct Appraisal {
    double valence = 0.0;  // -(total weighted squared error), <= 0
    double arousal = 0.0;  // normalised effort in [0,1]
};

struct EnthusiasmPolicy {
    std::size_t base_budget = 1;
    double base_gain = 1.0;
    double arousal_coupling = 1.0;
};

inline Appraisal appraise(std::span<const double> loop_errors, std::span<const double> weights,
                          std::size_t effort_used, const EnthusiasmPolicy& policy) {
    Appraisal appraisal;
    for (std::size_t i = 0; i < loop_errors.size(); ++i) {
        const double w = i < weights.size() ? weights[i] : 1.0;
        appraisal.valence -= w * loop_errors[i] * loop_errors[i];
    }
    const double denom = static_cast<double>(policy.base_budget) * policy.arousal_coupling;
    appraisal.arousal = denom > 0.0
                            ? std::min(1.0, static_cast<double>(effort_used) / denom)
                            : (effort_used > 0 ? 1.0 : 0.0);
    return appraisal;
}

struct Effort {
    std::size_t budget = 1;
    double gain = 0.0;
};

/// Enthusiasm scales effort: urgent needs get deeper searches and hotter
/// loop gains.  Over-enthusiasm is allowed and can destabilise a loop;
/// that outcome is an experiment, not a bug.
inline Effort enthusiasm_to_effort(const EnthusiasmPolicy& policy, double urgency) {
    if (urgency < 0.0) {
        throw invalid_input_error("enthusiasm_to_effort: urgency must be non-negative");
    }
    const double multiplier = 1.0 + policy.arousal_coupling * urgency;
    Effort effort;
    effort.budget = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(policy.base_budget) * multiplier)));
    effort.gain = policy.base_gain * multiplier;
    return effort;
}

}  // namespace pct
