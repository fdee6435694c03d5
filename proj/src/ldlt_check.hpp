#pragma once

#include <Eigen/Dense>

#include "conformal/dataset.hpp"

namespace conformal::detail {

// LDLT of a singular-but-consistent system still produces finite solutions;
// reject those explicitly via the pivot spread.
inline void require_well_conditioned(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
    if (ldlt.info() != Eigen::Success)
        throw NumericError("matrix factorization failed");
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    if (d.size() == 0) return;
    double dmax = d.maxCoeff();
    double dmin = d.minCoeff();
    if (!(dmax > 0.0) || dmin < 1e-12 * dmax)
        throw NumericError("singular or near-singular regularized system");
}

}  // namespace conformal::detail
