#pragma once

// Control as search: argmin over candidate actions/causes under an
// evaluation budget.  Strategies: exhaustive scan, seeded random
// permutation, and finite-difference gradient descent.  Planning searches
// a forward model instead of the world.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pct/errors.hpp"

namespace pct {

// Mismatch metrics: squared difference for reals, squared Euclidean for
// named vectors, 0/1 for discrete symbols.
inline double mismatch(double a, double b) { return (a - b) * (a - b); }

inline double mismatch(int a, int b) { return a == b ? 0.0 : 1.0; }

inline double mismatch(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
    double total = 0.0;
    for (const auto& [name, value] : a) {
        auto it = b.find(name);
        const double other = it != b.end() ? it->second : 0.0;
        total += (value - other) * (value - other);
    }
    for (const auto& [name, value] : b) {
        if (!a.contains(name)) total += value * value;
    }
    return total;
}

template <typename Candidate>
struct DiscreteSpace {
    std::vector<Candidate> candidates;
};

struct ContinuousSpace {
    std::vector<double> low;
    std::vector<double> high;

    std::size_t dimension() const { return low.size(); }
};

struct SearchBudget {
    std::size_t max_evaluations = 1;
    double tolerance = 0.0;  // early stop when best_error <= tolerance
};

template <typename Candidate>
struct SearchResult {
    Candidate best_candidate{};
    double best_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    bool tie_broken = false;
};

/// Deterministic exhaustive scan; ties broken by lowest candidate index.
template <typename Candidate, typename Objective>
SearchResult<Candidate> argmin_exhaustive(const DiscreteSpace<Candidate>& space, Objective&& eval,
                                          const SearchBudget& budget) {
    if (space.candidates.empty()) {
        throw invalid_input_error("argmin_exhaustive: empty candidate space");
    }
    if (space.candidates.size() > budget.max_evaluations) {
        throw budget_exceeded_error("argmin_exhaustive: budget smaller than candidate space");
    }
    SearchResult<Candidate> result;
    bool first = true;
    std::size_t best_count = 0;
    for (const Candidate& candidate : space.candidates) {
        const double error = eval(candidate);
        ++result.evaluations;
        if (first || error < result.best_error) {
            result.best_candidate = candidate;
            result.best_error = error;
            best_count = 1;
            first = false;
        } else if (error == result.best_error) {
            ++best_count;
        }
    }
    result.tie_broken = best_count > 1;
    result.converged = result.best_error <= budget.tolerance;
    return result;
}

/// Seeded uniform permutation without repetition; stops on the first
/// candidate within tolerance or when the budget runs out.
template <typename Candidate, typename Objective>
SearchResult<Candidate> argmin_random(const DiscreteSpace<Candidate>& space, Objective&& eval,
                                      const SearchBudget& budget, std::uint64_t seed) {
    if (space.candidates.empty()) {
        throw invalid_input_error("argmin_random: empty candidate space");
    }
    std::vector<std::size_t> order(space.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Fisher-Yates with mt19937_64; the generator's output sequence is
    // pinned by the standard, so permutations are portable.
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }
    SearchResult<Candidate> result;
    bool first = true;
    for (std::size_t index : order) {
        if (result.evaluations >= budget.max_evaluations) break;
        const double error = eval(space.candidates[index]);
        ++result.evaluations;
        if (first || error < result.best_error) {
            result.best_candidate = space.candidates[index];
            result.best_error = error;
            first = false;
        } else if (error == result.best_error) {
            result.tie_broken = true;
        }
        if (result.best_error <= budget.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

/// Central-difference gradient with per-dimension epsilon proportional to
/// the box width.  Exposed for the gradient-check property test.
template <typename Objective>
std::vector<double> finite_difference_gradient(Objective&& eval, const std::vector<double>& x,
                                               const ContinuousSpace& space,
                                               std::size_t* evaluations = nullptr) {
    std::vector<double> grad(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double eps = 1e-5 * (space.high[i] - space.low[i]);
        std::vector<double> forward = x;
        std::vector<double> backward = x;
        forward[i] += eps;
        backward[i] -= eps;
        const double f_plus = eval(forward);
        const double f_minus = eval(backward);
        if (evaluations) *evaluations += 2;
        if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
            throw invalid_objective_error("finite_difference_gradient: non-finite evaluation");
        }
        grad[i] = (f_plus - f_minus) / (2.0 * eps);
    }
    return grad;
}

/// Gradient descent with backtracking step halving.  Stops at tolerance,
/// budget exhaustion, or step underflow.  The result never regresses
/// below the start point's error.
template <typename Objective>
SearchResult<std::vector<double>> argmin_gradient(const ContinuousSpace& space, Objective&& eval,
                                                  const SearchBudget& budget, double step_init,
                                                  std::vector<double> start) {
    if (space.dimension() == 0 || start.size() != space.dimension()) {
        throw invalid_input_error("argmin_gradient: dimension mismatch");
    }
    if (!(step_init > 0.0)) {
        throw invalid_input_error("argmin_gradient: step_init must be positive");
    }
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (!(space.low[i] < space.high[i])) {
            throw invalid_input_error("argmin_gradient: invalid box bounds");
        }
    }
    auto clamp = [&space](std::vector<double>& x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < space.low[i]) x[i] = space.low[i];
            if (x[i] > space.high[i]) x[i] = space.high[i];
        }
    };
    clamp(start);

    SearchResult<std::vector<double>> result;
    const double f0 = eval(start);
    ++result.evaluations;
    if (!std::isfinite(f0)) {
        throw invalid_objective_error("argmin_gradient: non-finite evaluation");
    }
    result.best_candidate = start;
    result.best_error = f0;
    if (result.best_error <= budget.tolerance) {
        result.converged = true;
        return result;
    }

    double step = step_init;
    double min_width = space.high[0] - space.low[0];
    for (std::size_t i = 1; i < space.dimension(); ++i) {
        min_width = std::min(min_width, space.high[i] - space.low[i]);
    }
    const double step_floor = 1e-12 * min_width;

    std::vector<double> x = start;
    double fx = f0;
    while (result.evaluations + 2 * space.dimension() + 1 <= budget.max_evaluations) {
        const auto grad = finite_difference_gradient(eval, x, space, &result.evaluations);
        double norm = 0.0;
        for (double g : grad) norm += g * g;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;

        bool advanced = false;
        while (step >= step_floor && result.evaluations < budget.max_evaluations) {
            std::vector<double> candidate = x;
            for (std::size_t i = 0; i < x.size(); ++i) {
                candidate[i] -= step * grad[i] / norm;
            }
            clamp(candidate);
            const double fc = eval(candidate);
            ++result.evaluations;
            if (!std::isfinite(fc)) {
                throw invalid_objective_error("argmin_gradient: non-finite evaluation");
            }
            if (fc < fx) {
                x = std::move(candidate);
                fx = fc;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if (fx < result.best_error) {
            result.best_candidate = x;
            result.best_error = fx;
        }
        if (result.best_error <= budget.tolerance) {
            result.converged = true;
            break;
        }
        if (!advanced || step < step_floor) break;
    }
    return result;
}

enum class SearchStrategy { exhaustive, random };

/// Planning per the imagination-mode reading of control: the objective is
/// the mismatch between the intention and the model's prediction, so no
/// world steps ever happen inside the search.
template <typename Model, typename Candidate, typename Intention>
SearchResult<Candidate> plan_with_forward_model(const Model& model, const Intention& intention,
                                                const DiscreteSpace<Candidate>& space,
                                                const SearchBudget& budget,
                                                SearchStrategy strategy = SearchStrategy::exhaustive,
                                                std::uint64_t seed = 0) {
    auto eval = [&](const Candidate& candidate) {
        return mismatch(intention, model.predict(candidate));
    };
    if (strategy == SearchStrategy::random) {
        return argmin_random(space, eval, budget, seed);
    }
    return argmin_exhaustive(space, eval, budget);
}

}  // namespace pct
