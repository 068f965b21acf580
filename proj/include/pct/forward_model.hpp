#pragma once

// Estimated transforms: tabular and affine forward models, fitting from
// logged experience (counting / least squares), exact inversion for
// tabular models, and analysis-by-synthesis cause inference that searches
// the model instead of inverting it.

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pct/errors.hpp"
#include "pct/search.hpp"

namespace pct {

template <typename In, typename Out>
struct Experience {
    In input;
    Out output;
    long tick = 0;
};

template <typename In, typename Out>
struct ExperienceLog {
    std::vector<Experience<In, Out>> pairs;  // append-only

    void record(In input, Out output, long tick = 0) {
        pairs.push_back({std::move(input), std::move(output), tick});
    }
};

template <typename In, typename Out>
struct TabularModel {
    std::map<In, Out> table;
    std::size_t fitted_from = 0;

    Out predict(const In& input) const {
        auto it = table.find(input);
        if (it == table.end()) {
            throw unknown_input_error("TabularModel::predict: input not in table");
        }
        return it->second;
    }
    bool knows(const In& input) const { return table.contains(input); }
};

/// Last observed output per input wins, mirroring the memory-store
/// semantics used elsewhere.
template <typename In, typename Out>
TabularModel<In, Out> fit_tabular(const ExperienceLog<In, Out>& log) {
    if (log.pairs.empty()) {
        throw invalid_input_error("fit_tabular: need at least one pair");
    }
    TabularModel<In, Out> model;
    for (const auto& pair : log.pairs) {
        model.table[pair.input] = pair.output;
    }
    model.fitted_from = log.pairs.size();
    return model;
}

struct AffineModel {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;
    std::size_t fitted_from = 0;

    std::vector<double> predict(const std::vector<double>& input) const {
        if (static_cast<Eigen::Index>(input.size()) != weights.cols()) {
            throw invalid_input_error("AffineModel::predict: input dimension mismatch");
        }
        Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(input.data(),
                                                              static_cast<Eigen::Index>(input.size()));
        Eigen::VectorXd y = weights * x + bias;
        return {y.data(), y.data() + y.size()};
    }
};

/// Least-squares affine fit.  Rank deficiency in the augmented design
/// matrix is an error naming the deficient input directions.
inline AffineModel fit_affine(const ExperienceLog<std::vector<double>, std::vector<double>>& log,
                              std::size_t in_dim, std::size_t out_dim) {
    const auto n = log.pairs.size();
    if (n < in_dim + 1) {
        throw degenerate_fit_error("fit_affine: need at least dimension+1 pairs");
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(in_dim) + 1);
    Eigen::MatrixXd targets(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(out_dim));
    for (std::size_t row = 0; row < n; ++row) {
        const auto& pair = log.pairs[row];
        if (pair.input.size() != in_dim || pair.output.size() != out_dim) {
            throw invalid_input_error("fit_affine: inconsistent pair dimensions");
        }
        for (std::size_t col = 0; col < in_dim; ++col) {
            design(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = pair.input[col];
        }
        design(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(in_dim)) = 1.0;
        for (std::size_t col = 0; col < out_dim; ++col) {
            targets(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = pair.output[col];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) {
        const auto& perm = qr.colsPermutation().indices();
        std::string deficient = "fit_affine: rank-deficient fit; deficient directions:";
        for (Eigen::Index i = qr.rank(); i < design.cols(); ++i) {
            const Eigen::Index col = perm(i);
            deficient += ' ';
            deficient += (col == static_cast<Eigen::Index>(in_dim)) ? std::string("bias")
                                                                    : std::to_string(col);
        }
        throw degenerate_fit_error(deficient);
    }
    Eigen::MatrixXd solution = qr.solve(targets);  // (in_dim+1) x out_dim
    AffineModel model;
    model.weights = solution.topRows(static_cast<Eigen::Index>(in_dim)).transpose();
    model.bias = solution.row(static_cast<Eigen::Index>(in_dim)).transpose();
    model.fitted_from = n;
    return model;
}

template <typename In>
struct InversionResult {
    std::vector<In> preimages;  // sorted ascending

    bool miss() const { return preimages.empty(); }
    bool unique() const { return preimages.size() == 1; }
    bool ambiguous() const { return preimages.size() > 1; }
};

/// Exact preimage lookup.  Non-injective outputs yield the full preimage
/// list; absent outputs yield a miss.  Both are results, not errors.
template <typename In, typename Out>
InversionResult<In> invert_exact(const TabularModel<In, Out>& model, const Out& observed) {
    InversionResult<In> result;
    for (const auto& [input, output] : model.table) {
        if (output == observed) result.preimages.push_back(input);
    }
    return result;
}

/// Analysis-by-synthesis: search candidate causes for the best match
/// between predicted and observed consequences.
template <typename Model, typename In, typename Out>
SearchResult<In> infer_cause(const Model& model, const Out& observed,
                             const DiscreteSpace<In>& candidates, const SearchBudget& budget,
                             SearchStrategy strategy = SearchStrategy::exhaustive,
                             std::uint64_t seed = 0) {
    auto eval = [&](const In& candidate) { return mismatch(observed, model.predict(candidate)); };
    if (strategy == SearchStrategy::random) {
        return argmin_random(candidates, eval, budget, seed);
    }
    return argmin_exhaustive(candidates, eval, budget);
}

}  // namespace pct
