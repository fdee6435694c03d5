#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/kernel.hpp"

namespace conformal {

// One strangeness score per example of a completed sequence, aligned with
// sequence order. Scores are finite or +infinity, never NaN.
using Scores = std::vector<double>;

struct KnnConfig {
    int k = 1;
    KernelSpec kernel = KernelSpec::linear();
};

struct RidgeConfig {
    double a = 1.0;                     // ridge parameter, >= 0
    std::optional<KernelSpec> kernel;   // nullopt: primal ridge on raw features
};

void validate_ridge(const RidgeConfig& cfg);

enum class Discrepancy { AbsoluteError, ZeroOne };

// Delta(y, predicted): absolute error for regression labels, 0/1 mismatch
// for class labels.
double discrepancy(Discrepancy d, const Label& y, const Label& predicted);

// Nearest-neighbour distance-ratio scores: sum of the j smallest same-label
// distances over the sum of the j smallest other-label distances, with
// j = min(k, available same, available other). Degenerate cases: no
// other-label examples -> 0; no same-label examples -> +inf; zero
// denominator -> +inf (or 1 when the numerator is zero too).
Scores knn_scores(const Dataset& seq, const KnnConfig& cfg);

// Absolute residuals |y_i - f(x_i)| of the (kernel) ridge fit to the whole
// sequence, test candidate included.
Scores residual_scores(const Dataset& seq, const RidgeConfig& cfg);

// Scores of (actual, predicted) pairs under a frozen rule.
Scores delta_scores(const std::vector<std::pair<Label, Label>>& actual_vs_predicted,
                    Discrepancy d);

namespace serial {
// Reference implementation of knn_scores without the OpenMP loops; kept for
// the equivalence tests and the benchmarks.
Scores knn_scores(const Dataset& seq, const KnnConfig& cfg);
}

// A nonconformity measure maps a completed sequence to its score vector and
// must be exchange-symmetric: swapping two examples swaps their scores.
using Measure = std::function<Scores(const Dataset&)>;

Measure make_knn_measure(KnnConfig cfg);
Measure make_ridge_measure(RidgeConfig cfg);

}  // namespace conformal
