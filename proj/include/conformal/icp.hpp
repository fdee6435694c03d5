#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/kernel.hpp"
#include "conformal/nonconformity.hpp"
#include "conformal/prediction.hpp"

namespace conformal {

// A frozen prediction rule and a learner producing one from a training set.
using PredictionRule = std::function<Label(const std::vector<double>&)>;
using Learner = std::function<PredictionRule(const Dataset&)>;

Learner kernel_ridge_learner(RidgeConfig cfg);
Learner nearest_neighbor_learner(KernelSpec kernel = KernelSpec::linear());

// Split conformal predictor: a rule trained on the proper training set plus
// the sorted nonconformity scores of the calibration set.
struct IcpModel {
    PredictionRule rule;
    std::vector<double> calibration_scores;  // ascending
    Discrepancy delta = Discrepancy::AbsoluteError;
    std::size_t proper_size = 0;
    LabelSpace space = LabelSpace::real_line();
};

// Default proper-training size ceil(2l/3), clamped so the calibration set
// stays nonempty.
std::size_t icp_default_split(std::size_t l);

IcpModel icp_fit(const Dataset& training, std::size_t split_m, const Learner& learner,
                 Discrepancy delta);

// (count of calibration scores >= test score, plus one) / (calibration + 1),
// via binary search over the sorted calibration scores.
double icp_p_value(const IcpModel& model, const std::vector<double>& object,
                   const Label& candidate);

// Classification: alphabet scan. Regression with the absolute-error
// discrepancy: closed-form interval centred at the rule's prediction.
PredictionSet icp_predict(const IcpModel& model, const std::vector<double>& object,
                          Epsilon eps);

}  // namespace conformal
