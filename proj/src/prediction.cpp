#include "conformal/prediction.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

Epsilon::Epsilon(double v) : v_(v) {
    if (!(v > 0.0 && v < 1.0))
        throw UsageError("significance level must lie strictly between 0 and 1");
}

bool Interval::bounded() const {
    return std::isfinite(lo) && std::isfinite(hi);
}

PredictionSet PredictionSet::of_labels(std::vector<int> sorted_class_ids) {
    PredictionSet s(Kind::Labels);
    for (std::size_t i = 0; i + 1 < sorted_class_ids.size(); ++i) {
        if (sorted_class_ids[i] >= sorted_class_ids[i + 1])
            throw UsageError("label set must be strictly increasing");
    }
    s.labels_ = std::move(sorted_class_ids);
    return s;
}

PredictionSet PredictionSet::of_intervals(std::vector<Interval> disjoint_sorted) {
    PredictionSet s(Kind::Intervals);
    for (const auto& iv : disjoint_sorted) {
        if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi)
            throw UsageError("malformed interval in prediction set");
    }
    for (std::size_t i = 0; i + 1 < disjoint_sorted.size(); ++i) {
        if (!(disjoint_sorted[i].hi < disjoint_sorted[i + 1].lo))
            throw UsageError("prediction-set intervals must be disjoint and sorted");
    }
    s.intervals_ = std::move(disjoint_sorted);
    return s;
}

bool PredictionSet::empty() const {
    return kind_ == Kind::Labels ? labels_.empty() : intervals_.empty();
}

std::size_t PredictionSet::label_count() const {
    if (kind_ != Kind::Labels) throw UsageError("label_count on an interval prediction set");
    return labels_.size();
}

bool PredictionSet::contains_class(int class_id) const {
    if (kind_ != Kind::Labels) return false;
    return std::binary_search(labels_.begin(), labels_.end(), class_id);
}

bool PredictionSet::contains_value(double y) const {
    if (kind_ != Kind::Intervals) return false;
    for (const auto& iv : intervals_) {
        if (iv.contains(y)) return true;
        if (y < iv.lo) break;
    }
    return false;
}

bool PredictionSet::contains(const Label& label) const {
    return label.is_class() ? contains_class(label.class_id()) : contains_value(label.value());
}

}  // namespace conformal
