#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conformal/dataset.hpp"

namespace conformal {

// Significance level; the confidence level is 1 - epsilon. Open interval:
// 0 and 1 are rejected.
class Epsilon {
public:
    explicit Epsilon(double v);
    double value() const { return v_; }

private:
    double v_;
};

// Closed interval; endpoints may be +-infinity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double y) const { return y >= lo && y <= hi; }
    bool bounded() const;
};

// Per-candidate-label p-values for one test object, aligned with the
// dataset's alphabet order.
struct PValueTable {
    std::vector<std::string> labels;
    std::vector<double> p;

    std::size_t size() const { return p.size(); }
};

// Finite label set (classification) or a union of disjoint closed intervals
// sorted by lower endpoint (regression).
class PredictionSet {
public:
    enum class Kind { Labels, Intervals };

    static PredictionSet of_labels(std::vector<int> sorted_class_ids);
    static PredictionSet of_intervals(std::vector<Interval> disjoint_sorted);

    Kind kind() const { return kind_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<Interval>& intervals() const { return intervals_; }

    bool empty() const;
    std::size_t label_count() const;           // classification only
    bool contains(const Label& label) const;
    bool contains_class(int class_id) const;
    bool contains_value(double y) const;

private:
    PredictionSet(Kind kind) : kind_(kind) {}
    Kind kind_;
    std::vector<int> labels_;
    std::vector<Interval> intervals_;
};

// Point prediction plus the two p-value summaries: confidence excludes the
// alternatives, credibility measures how typical the best completion is.
struct ConfidenceCredibility {
    int prediction = 0;       // class id of the argmax p-value
    double confidence = 0.0;  // 1 - second largest p
    double credibility = 0.0; // largest p
};

}  // namespace conformal
