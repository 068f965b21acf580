#include "pct/search.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pct/forward_model.hpp"

namespace pct {
namespace {

DiscreteSpace<int> index_space(int n) {
    DiscreteSpace<int> space;
    for (int i = 0; i < n; ++i) space.candidates.push_back(i);
    return space;
}

TEST(ArgminExhaustive, FindsMinimum) {
    DiscreteSpace<double> space{{3.0, 1.0, 2.0}};
    const auto result =
        argmin_exhaustive(space, [](double c) { return c; }, SearchBudget{10, 0.0});
    EXPECT_DOUBLE_EQ(result.best_candidate, 1.0);
    EXPECT_DOUBLE_EQ(result.best_error, 1.0);
    EXPECT_EQ(result.evaluations, 3u);
    EXPECT_FALSE(result.tie_broken);
}

TEST(ArgminExhaustive, ConstantObjectiveBreaksTieToFirst) {
    const auto result = argmin_exhaustive(index_space(4), [](int) { return 5.0; },
                                          SearchBudget{4, 0.0});
    EXPECT_EQ(result.best_candidate, 0);
    EXPECT_TRUE(result.tie_broken);
}

TEST(ArgminExhaustive, BudgetSmallerThanSpace) {
    EXPECT_THROW(
        argmin_exhaustive(index_space(5), [](int) { return 0.0; }, SearchBudget{4, 0.0}),
        budget_exceeded_error);
}

// Oracle equivalence against an independent linear scan on random
// instances up to size 1e4.
TEST(ArgminExhaustive, MatchesIndependentScan) {
    std::mt19937_64 rng(7);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10000);
        std::vector<double> errors(static_cast<std::size_t>(n));
        for (double& e : errors) e = uniform();
        const auto result = argmin_exhaustive(
            index_space(n), [&](int i) { return errors[static_cast<std::size_t>(i)]; },
            SearchBudget{static_cast<std::size_t>(n), 0.0});
        int scan_best = 0;
        for (int i = 1; i < n; ++i) {
            if (errors[static_cast<std::size_t>(i)] < errors[static_cast<std::size_t>(scan_best)]) {
                scan_best = i;
            }
        }
        EXPECT_EQ(result.best_candidate, scan_best);
    }
}

TEST(ArgminRandom, BudgetOfOneEvaluatesOnce) {
    const auto result =
        argmin_random(index_space(10), [](int) { return 1.0; }, SearchBudget{1, 0.0}, 3);
    EXPECT_EQ(result.evaluations, 1u);
}

TEST(ArgminRandom, SameSeedSameResult) {
    auto run = [] {
        return argmin_random(index_space(50), [](int c) { return std::abs(c - 31); },
                             SearchBudget{20, 0.0}, 99);
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.best_candidate, b.best_candidate);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(ArgminRandom, StopsOnTolerance) {
    int evals = 0;
    const auto result = argmin_random(
        index_space(100),
        [&evals](int c) {
            ++evals;
            return c == 42 ? 0.0 : 1.0;
        },
        SearchBudget{100, 0.0}, 5);
    EXPECT_TRUE(result.converged);
    EXPECT_EQ(result.best_candidate, 42);
    EXPECT_EQ(result.evaluations, static_cast<std::size_t>(evals));
}

// Mean trials to hit one marked candidate out of 8 without replacement
// is (n+1)/2 = 4.5.
TEST(ArgminRandom, MeanTrialsMatchClosedForm) {
    const int n = 8;
    const int runs = 10000;
    double total = 0.0;
    for (int s = 0; s < runs; ++s) {
        const int target = s % n;
        const auto result = argmin_random(
            index_space(n), [target](int c) { return c == target ? 0.0 : 1.0; },
            SearchBudget{static_cast<std::size_t>(n), 0.0}, static_cast<std::uint64_t>(s));
        total += static_cast<double>(result.evaluations);
    }
    EXPECT_NEAR(total / runs, 4.5, 0.1);
}

TEST(ArgminGradient, ConvexQuadraticConverges) {
    const ContinuousSpace space{{-10.0, -10.0}, {10.0, 10.0}};
    auto quadratic = [](const std::vector<double>& x) {
        const double dx = x[0] - 1.5;
        const double dy = x[1] + 2.0;
        return dx * dx + 2.0 * dy * dy;
    };
    const auto result =
        argmin_gradient(space, quadratic, SearchBudget{20000, 0.0}, 1.0, {8.0, 8.0});
    EXPECT_NEAR(result.best_candidate[0], 1.5, 1e-4);
    EXPECT_NEAR(result.best_candidate[1], -2.0, 1e-4);
}

TEST(ArgminGradient, StartAtMinimumConvergesImmediately) {
    const ContinuousSpace space{{-1.0}, {1.0}};
    auto quadratic = [](const std::vector<double>& x) { return x[0] * x[0]; };
    const auto result =
        argmin_gradient(space, quadratic, SearchBudget{1000, 1e-12}, 0.1, {0.0});
    EXPECT_TRUE(result.converged);
    EXPECT_EQ(result.evaluations, 1u);
}

// Two basins: started in the shallow one, plain descent must end at the
// shallow basin's local minimum rather than the global one.
TEST(ArgminGradient, StaysInLocalBasin) {
    const ContinuousSpace space{{-4.0}, {4.0}};
    // Minima near x=-2 (value ~1) and x=+2 (value ~0), barrier at x=0.
    auto two_basin = [](const std::vector<double>& x) {
        const double left = (x[0] + 2.0) * (x[0] + 2.0) + 1.0;
        const double right = (x[0] - 2.0) * (x[0] - 2.0);
        return std::min(left, right);
    };
    const auto result =
        argmin_gradient(space, two_basin, SearchBudget{5000, 0.0}, 0.5, {-3.0});
    EXPECT_NEAR(result.best_candidate[0], -2.0, 1e-2);
    EXPECT_NEAR(result.best_error, 1.0, 1e-3);
}

TEST(ArgminGradient, NeverWorseThanStart) {
    std::mt19937_64 rng(11);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    const ContinuousSpace space{{-5.0}, {5.0}};
    auto bumpy = [](const std::vector<double>& x) {
        return std::sin(3.0 * x[0]) + 0.1 * x[0] * x[0] + 1.5;
    };
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<double> start{uniform(-5.0, 5.0)};
        const double f0 = bumpy(start);
        const auto result = argmin_gradient(space, bumpy, SearchBudget{300, 0.0}, 0.3, start);
        EXPECT_LE(result.best_error, f0);
    }
}

TEST(ArgminGradient, NonFiniteObjectiveRejected) {
    const ContinuousSpace space{{-1.0}, {1.0}};
    auto bad = [](const std::vector<double>&) { return std::nan(""); };
    EXPECT_THROW(argmin_gradient(space, bad, SearchBudget{100, 0.0}, 0.1, {0.5}),
                 invalid_objective_error);
}

// Internal finite-difference gradient agrees with central differences of
// the objective to 1e-6 relative on a smooth function.
TEST(FiniteDifferenceGradient, MatchesCentralDifferences) {
    const ContinuousSpace space{{-2.0, -2.0}, {2.0, 2.0}};
    auto smooth = [](const std::vector<double>& x) {
        return std::exp(0.3 * x[0]) * std::cos(x[1]) + x[0] * x[1];
    };
    const std::vector<double> point{0.7, -0.4};
    const auto grad = finite_difference_gradient(smooth, point, space);
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double eps = 1e-5 * (space.high[i] - space.low[i]);
        auto shifted = point;
        shifted[i] += eps;
        const double f_plus = smooth(shifted);
        shifted[i] -= 2.0 * eps;
        const double f_minus = smooth(shifted);
        const double central = (f_plus - f_minus) / (2.0 * eps);
        EXPECT_NEAR(grad[i], central, 1e-6 * std::max(1.0, std::abs(central)));
    }
}

// Budget honesty + monotone best-so-far, property tested across random
// objectives for all strategies.
TEST(SearchProperties, BudgetHonestyAndMonotoneBest) {
    std::mt19937_64 rng(123);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 200);
        std::vector<double> errors(static_cast<std::size_t>(n));
        for (double& e : errors) e = uniform();
        const std::size_t max_evals = 1 + rng() % static_cast<std::uint64_t>(n);

        std::vector<double> best_so_far;
        double running = std::numeric_limits<double>::infinity();
        auto tracked = [&](int i) {
            const double e = errors[static_cast<std::size_t>(i)];
            running = std::min(running, e);
            best_so_far.push_back(running);
            return e;
        };
        const auto result = argmin_random(index_space(n), tracked,
                                          SearchBudget{max_evals, 0.0}, rng());
        EXPECT_LE(result.evaluations, max_evals);
        EXPECT_EQ(result.best_error, best_so_far.back());
        for (std::size_t i = 1; i < best_so_far.size(); ++i) {
            EXPECT_LE(best_so_far[i], best_so_far[i - 1]);
        }
    }
}

TEST(Planning, PerfectModelIdentityTargetIsNoOp) {
    TabularModel<int, double> model;
    for (int i = 0; i < 10; ++i) model.table[i] = static_cast<double>(i);
    // Intention equal to the current observation: candidate 3 predicts it
    // exactly, so planning returns it with zero error.
    const auto result = plan_with_forward_model(model, 3.0, index_space(10),
                                                SearchBudget{10, 0.0});
    EXPECT_EQ(result.best_candidate, 3);
    EXPECT_DOUBLE_EQ(result.best_error, 0.0);
}

TEST(Mismatch, MetricShapes) {
    EXPECT_DOUBLE_EQ(mismatch(2.0, 5.0), 9.0);
    EXPECT_DOUBLE_EQ(mismatch(3, 3), 0.0);
    EXPECT_DOUBLE_EQ(mismatch(3, 4), 1.0);
    const std::map<std::string, double> a{{"x", 1.0}, {"y", 2.0}};
    const std::map<std::string, double> b{{"x", 2.0}, {"y", 0.0}};
    EXPECT_DOUBLE_EQ(mismatch(a, b), 1.0 + 4.0);
}

}  // namespace
}  // namespace pct
