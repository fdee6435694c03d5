#include "conformal/knn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conformal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

KnnScorer::KnnScorer(KnnConfig cfg, std::size_t dim, std::size_t n_classes)
    : cfg_(std::move(cfg)), dim_(dim), n_classes_(n_classes), class_count_(n_classes, 0) {
    if (cfg_.k < 1) throw UsageError("KnnScorer needs k >= 1");
    if (n_classes_ < 2) throw UsageError("KnnScorer needs an alphabet of at least two classes");
}

void KnnScorer::bounded_insert(NearList& list, double d, std::size_t k) {
    if (list.size() == k) {
        if (d >= list.back()) return;
        list.pop_back();
    }
    list.insert(std::upper_bound(list.begin(), list.end(), d), d);
}

double KnnScorer::score_of(std::size_t same_avail, std::size_t other_avail,
                           const std::vector<double>& same_sorted,
                           const std::vector<double>& other_sorted) const {
    if (other_avail == 0) return 0.0;
    if (same_avail == 0) return kInf;
    std::size_t j = std::min({static_cast<std::size_t>(cfg_.k), same_avail, other_avail});
    double s_plus = 0.0, s_minus = 0.0;
    for (std::size_t q = 0; q < j; ++q) s_plus += same_sorted[q];
    for (std::size_t q = 0; q < j; ++q) s_minus += other_sorted[q];
    if (s_minus == 0.0) return s_plus == 0.0 ? 1.0 : kInf;
    return s_plus / s_minus;
}

void KnnScorer::add(const std::vector<double>& object, int class_id) {
    if (object.size() != dim_) throw UsageError("KnnScorer: object dimension mismatch");
    if (class_id < 0 || class_id >= static_cast<int>(n_classes_))
        throw UsageError("KnnScorer: class id outside alphabet");

    const std::size_t k = static_cast<std::size_t>(cfg_.k);
    const std::size_t m = objects_.size();
    std::vector<NearList> own(n_classes_);
    for (std::size_t i = 0; i < m; ++i) {
        double d = cfg_.kernel.distance(objects_[i], object);
        bounded_insert(near_k_[i][class_id], d, k);
        bounded_insert(own[labels_[i]], d, k);
    }
    objects_.push_back(object);
    labels_.push_back(class_id);
    ++class_count_[class_id];
    near_k_.push_back(std::move(own));
}

Scores KnnScorer::scores_with(const std::vector<double>& test_object, int candidate) const {
    if (test_object.size() != dim_) throw UsageError("KnnScorer: test object dimension mismatch");
    if (candidate < 0 || candidate >= static_cast<int>(n_classes_))
        throw UsageError("KnnScorer: candidate class outside alphabet");

    const std::size_t m = objects_.size();
    const std::size_t n = m + 1;
    const std::size_t k = static_cast<std::size_t>(cfg_.k);

    std::vector<double> row(m);
    for (std::size_t i = 0; i < m; ++i)
        row[i] = cfg_.kernel.distance(objects_[i], test_object);

    Scores alpha(n);
    std::vector<double> same, other;
    for (std::size_t i = 0; i < m; ++i) {
        const int cls = labels_[i];
        std::size_t same_count = class_count_[cls] + (candidate == cls ? 1 : 0);
        std::size_t same_avail = same_count - 1;
        std::size_t other_avail = (n - 1) - same_avail;

        same.clear();
        other.clear();
        same.insert(same.end(), near_k_[i][cls].begin(), near_k_[i][cls].end());
        for (std::size_t c = 0; c < n_classes_; ++c) {
            if (static_cast<int>(c) == cls) continue;
            other.insert(other.end(), near_k_[i][c].begin(), near_k_[i][c].end());
        }
        (candidate == cls ? same : other).push_back(row[i]);
        std::sort(same.begin(), same.end());
        std::sort(other.begin(), other.end());
        alpha[i] = score_of(same_avail, other_avail, same, other);
    }

    // Test example: split its distance row by class, keeping the k smallest.
    std::size_t same_avail = class_count_[candidate];
    std::size_t other_avail = m - same_avail;
    same.clear();
    other.clear();
    for (std::size_t i = 0; i < m; ++i)
        bounded_insert(labels_[i] == candidate ? same : other, row[i], k);
    alpha[m] = score_of(same_avail, other_avail, same, other);
    return alpha;
}

}  // namespace conformal
