#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/prediction.hpp"

namespace conformal {

// Gaussian linear data generator: w ~ N(0, (1/a_true) I_p), objects uniform
// on the box, y = w.x + noise.
struct LinearModelSpec {
    std::size_t p = 5;
    double a_true = 1.0;
    double x_low = -10.0;
    double x_high = 10.0;
    double noise_sd = 1.0;
};

std::pair<Dataset, Dataset> generate(const LinearModelSpec& spec, std::size_t l, std::size_t k,
                                     std::uint64_t seed);

// Shortest posterior-predictive interval of probability 1 - eps under the
// Gaussian linear model with prior precision a_assumed and unit noise:
// mean x0'(X'X + aI)^-1 X'y, variance 1 + x0'(X'X + aI)^-1 x0.
Interval bayes_interval(const Dataset& training, const std::vector<double>& object,
                        double a_assumed, Epsilon eps);

struct ExperimentGrid {
    std::vector<double> levels;                      // confidence levels in (0, 1)
    std::size_t trials = 10;
    std::size_t train_size = 100;
    std::size_t test_size = 100;
    std::vector<double> a_values = {1.0, 1000.0, 10000.0};
};

// 50 equispaced confidence levels on [0.5, 0.995].
std::vector<double> default_levels();

// Validity and efficiency curves for the ridge confidence machine and the
// Bayes-optimal predictor, per assumed prior precision. Indexed [a][level].
struct ComparisonCurves {
    std::vector<double> levels;
    std::vector<double> a_values;
    std::vector<std::vector<double>> rrcm_miscoverage;  // fraction of labels outside the hull
    std::vector<std::vector<double>> rrcm_mean_width;
    std::vector<std::vector<double>> bayes_miscoverage;
    std::vector<std::vector<double>> bayes_mean_width;
};

ComparisonCurves run_bayes_comparison(const ExperimentGrid& grid, const LinearModelSpec& spec,
                                      std::uint64_t seed);

}  // namespace conformal
