#pragma once

#include <optional>
#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/nonconformity.hpp"
#include "conformal/prediction.hpp"

namespace conformal {

// The i-th residual of the completed ridge fit, as a function of the
// candidate label y: |a + b*y|. One hat-matrix solve yields all n lines.
struct ResidualLine {
    double a = 0.0;
    double b = 0.0;
};

struct RegressionPrediction {
    PredictionSet gamma;            // union of disjoint closed intervals
    std::optional<Interval> hull;   // convex hull of gamma; nullopt when empty

    bool unbounded() const { return hull && !hull->bounded(); }
};

// Residual lines of the completed design (training objects plus the test
// object, candidate label unknown). Throws NumericError on a singular
// regularized system.
std::vector<ResidualLine> residual_lines(const Dataset& training,
                                         const std::vector<double>& object,
                                         const RidgeConfig& cfg);

// p(y): fraction of lines whose residual at y is at least the test line's.
double rrcm_p_value_at(const std::vector<ResidualLine>& lines, double y);

// Sorted, deduplicated roots of |a_i + b_i y| = |a_n + b_n y|; p(y) is
// piecewise constant between consecutive points.
std::vector<double> rrcm_critical_points(const std::vector<ResidualLine>& lines);

// Exact prediction set {y : p(y) > eps} and its convex hull, computed from
// the critical-point partition (no grid over the label space).
RegressionPrediction exact_interval(const std::vector<ResidualLine>& lines, Epsilon eps);

// One residual-lines solve and one critical-point pass shared across all
// significance levels.
std::vector<RegressionPrediction> rrcm_predict(const Dataset& training,
                                               const std::vector<double>& object,
                                               const RidgeConfig& cfg,
                                               const std::vector<Epsilon>& eps_list);

// Batch over test objects; OpenMP-parallel, one row per object.
std::vector<std::vector<RegressionPrediction>> rrcm_predict_batch(
    const Dataset& training, const std::vector<std::vector<double>>& objects,
    const RidgeConfig& cfg, const std::vector<Epsilon>& eps_list);

namespace serial {
std::vector<std::vector<RegressionPrediction>> rrcm_predict_batch(
    const Dataset& training, const std::vector<std::vector<double>>& objects,
    const RidgeConfig& cfg, const std::vector<Epsilon>& eps_list);
}

}  // namespace conformal
