#include "conformal/nonconformity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "conformal/ridge.hpp"

namespace conformal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_knn_input(const Dataset& seq, const KnnConfig& cfg) {
    if (cfg.k < 1) throw UsageError("knn_scores needs k >= 1");
    if (!seq.is_classification()) throw UsageError("knn_scores needs a classification dataset");
    if (seq.size() < 2) throw UsageError("knn_scores needs at least two examples");
}

// Eq.-style ratio with the degenerate conventions. Both sorted inputs are
// ascending; sums run over the shared j-range so the two sides stay
// comparable on small classes.
double knn_ratio(std::size_t k, std::size_t same_avail, std::size_t other_avail,
                 const std::vector<double>& same_sorted,
                 const std::vector<double>& other_sorted) {
    if (other_avail == 0) return 0.0;
    if (same_avail == 0) return kInf;
    std::size_t j = std::min({k, same_avail, other_avail});
    double s_plus = 0.0, s_minus = 0.0;
    for (std::size_t q = 0; q < j; ++q) s_plus += same_sorted[q];
    for (std::size_t q = 0; q < j; ++q) s_minus += other_sorted[q];
    if (s_minus == 0.0) return s_plus == 0.0 ? 1.0 : kInf;
    return s_plus / s_minus;
}

// Score of example i from the full distance matrix.
double knn_score_at(const Dataset& seq, const std::vector<double>& dist, std::size_t i,
                    std::size_t k, const std::vector<std::size_t>& class_count) {
    const std::size_t n = seq.size();
    const int cls = seq[i].label.class_id();
    const std::size_t same_avail = class_count[cls] - 1;
    const std::size_t other_avail = n - class_count[cls];

    std::vector<double> same, other;
    same.reserve(same_avail);
    other.reserve(other_avail);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        (seq[j].label.class_id() == cls ? same : other).push_back(dist[i * n + j]);
    }
    std::sort(same.begin(), same.end());
    std::sort(other.begin(), other.end());
    return knn_ratio(k, same_avail, other_avail, same, other);
}

std::vector<std::size_t> count_classes(const Dataset& seq) {
    std::vector<std::size_t> count(seq.label_space().n_classes(), 0);
    for (std::size_t i = 0; i < seq.size(); ++i) ++count[seq[i].label.class_id()];
    return count;
}

}  // namespace

namespace serial {

Scores knn_scores(const Dataset& seq, const KnnConfig& cfg) {
    validate_knn_input(seq, cfg);
    const std::size_t n = seq.size();

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = cfg.kernel.distance(seq[i].object, seq[j].object);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    const auto class_count = count_classes(seq);
    Scores alpha(n);
    for (std::size_t i = 0; i < n; ++i)
        alpha[i] = knn_score_at(seq, dist, i, static_cast<std::size_t>(cfg.k), class_count);
    return alpha;
}

}  // namespace serial

Scores knn_scores(const Dataset& seq, const KnnConfig& cfg) {
    validate_knn_input(seq, cfg);
    const std::size_t n = seq.size();

    std::vector<double> dist(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = cfg.kernel.distance(seq[i].object, seq[j].object);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    const auto class_count = count_classes(seq);
    Scores alpha(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        alpha[i] = knn_score_at(seq, dist, i, static_cast<std::size_t>(cfg.k), class_count);
    return alpha;
}

Scores residual_scores(const Dataset& seq, const RidgeConfig& cfg) {
    validate_ridge(cfg);
    if (seq.is_classification())
        throw UsageError("residual_scores needs a regression dataset");
    if (seq.empty()) throw UsageError("residual_scores needs at least one example");

    std::vector<std::vector<double>> objects;
    std::vector<double> y;
    objects.reserve(seq.size());
    y.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        objects.push_back(seq[i].object);
        y.push_back(seq[i].label.value());
    }
    std::vector<double> fitted = ridge_fitted(objects, y, cfg);

    Scores alpha(seq.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = std::fabs(y[i] - fitted[i]);
    return alpha;
}

double discrepancy(Discrepancy d, const Label& y, const Label& predicted) {
    if (y.kind() != predicted.kind())
        throw UsageError("discrepancy: actual and predicted labels differ in kind");
    switch (d) {
        case Discrepancy::AbsoluteError:
            return std::fabs(y.value() - predicted.value());
        case Discrepancy::ZeroOne:
            return y == predicted ? 0.0 : 1.0;
    }
    return 0.0;
}

Scores delta_scores(const std::vector<std::pair<Label, Label>>& actual_vs_predicted,
                    Discrepancy d) {
    Scores alpha;
    alpha.reserve(actual_vs_predicted.size());
    for (const auto& [y, pred] : actual_vs_predicted) alpha.push_back(discrepancy(d, y, pred));
    return alpha;
}

Measure make_knn_measure(KnnConfig cfg) {
    return [cfg](const Dataset& seq) { return knn_scores(seq, cfg); };
}

Measure make_ridge_measure(RidgeConfig cfg) {
    return [cfg](const Dataset& seq) { return residual_scores(seq, cfg); };
}

}  // namespace conformal
