#pragma once

#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/nonconformity.hpp"

namespace conformal {

// Fitted values H y of the (kernel) ridge fit to (objects, y):
// H = X (X'X + aI)^-1 X' in the primal case, H = K (K + aI)^-1 kernelized.
// Throws NumericError when the regularized system is singular.
std::vector<double> ridge_fitted(const std::vector<std::vector<double>>& objects,
                                 const std::vector<double>& y,
                                 const RidgeConfig& cfg);

// Applies I - H of the given design to each column of vs, reusing one
// factorization across columns.
std::vector<std::vector<double>> residual_operator_apply(
    const std::vector<std::vector<double>>& objects,
    const std::vector<std::vector<double>>& vs,
    const RidgeConfig& cfg);

// Trained ridge predictor for out-of-sample objects.
class RidgeModel {
public:
    RidgeModel(const Dataset& training, RidgeConfig cfg);

    double predict(const std::vector<double>& object) const;

private:
    RidgeConfig cfg_;
    std::vector<std::vector<double>> objects_;  // kept only for kernel predicts
    std::vector<double> coef_;                  // weights (primal) or dual coefficients
};

}  // namespace conformal
