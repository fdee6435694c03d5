#include "conformal/ridge.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ldlt_check.hpp"

namespace conformal {

namespace {

Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& objects) {
    const std::size_t n = objects.size();
    const std::size_t p = n == 0 ? 0 : objects[0].size();
    Eigen::MatrixXd X(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        if (objects[i].size() != p) throw UsageError("design rows differ in dimension");
        for (std::size_t j = 0; j < p; ++j) X(i, j) = objects[i][j];
    }
    return X;
}

Eigen::MatrixXd kernel_matrix(const std::vector<std::vector<double>>& objects,
                              const KernelSpec& kernel) {
    const std::size_t n = objects.size();
    Eigen::MatrixXd K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v = kernel(objects[i], objects[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

// Solve M z = rhs and reject solutions the factorization silently botched.
Eigen::VectorXd checked_solve(const Eigen::LDLT<Eigen::MatrixXd>& ldlt,
                              const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& rhs) {
    Eigen::VectorXd z = ldlt.solve(rhs);
    if (!z.allFinite())
        throw NumericError("singular regularized system in ridge solve");
    double scale = M.cwiseAbs().maxCoeff() * z.cwiseAbs().maxCoeff() +
                   rhs.cwiseAbs().maxCoeff() + 1e-300;
    double resid = (M * z - rhs).cwiseAbs().maxCoeff();
    if (resid > 1e-6 * scale)
        throw NumericError("ill-conditioned ridge system (relative residual " +
                           std::to_string(resid / scale) + ")");
    return z;
}

}  // namespace

void validate_ridge(const RidgeConfig& cfg) {
    if (cfg.a < 0.0) throw UsageError("ridge parameter must be nonnegative");
    if (cfg.kernel && !(cfg.a > 0.0))
        throw UsageError("kernel ridge requires a strictly positive ridge parameter");
}

std::vector<double> ridge_fitted(const std::vector<std::vector<double>>& objects,
                                 const std::vector<double>& y,
                                 const RidgeConfig& cfg) {
    validate_ridge(cfg);
    if (objects.size() != y.size()) throw UsageError("ridge_fitted: size mismatch");
    const std::size_t n = objects.size();
    if (n == 0) return {};
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

    Eigen::VectorXd fitted;
    if (!cfg.kernel) {
        Eigen::MatrixXd X = design_matrix(objects);
        Eigen::MatrixXd M = X.transpose() * X;
        M.diagonal().array() += cfg.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        fitted = X * checked_solve(ldlt, M, X.transpose() * yv);
    } else {
        Eigen::MatrixXd K = kernel_matrix(objects, *cfg.kernel);
        Eigen::MatrixXd M = K;
        M.diagonal().array() += cfg.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        fitted = K * checked_solve(ldlt, M, yv);
    }
    return std::vector<double>(fitted.data(), fitted.data() + n);
}

std::vector<std::vector<double>> residual_operator_apply(
    const std::vector<std::vector<double>>& objects,
    const std::vector<std::vector<double>>& vs,
    const RidgeConfig& cfg) {
    validate_ridge(cfg);
    const std::size_t n = objects.size();
    if (n == 0) throw UsageError("residual operator on an empty design");

    std::vector<std::vector<double>> out;
    out.reserve(vs.size());
    if (!cfg.kernel) {
        Eigen::MatrixXd X = design_matrix(objects);
        Eigen::MatrixXd M = X.transpose() * X;
        M.diagonal().array() += cfg.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        for (const auto& v : vs) {
            if (v.size() != n) throw UsageError("residual operator: vector size mismatch");
            Eigen::VectorXd vv = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
            Eigen::VectorXd r = vv - X * checked_solve(ldlt, M, X.transpose() * vv);
            out.emplace_back(r.data(), r.data() + n);
        }
    } else {
        Eigen::MatrixXd K = kernel_matrix(objects, *cfg.kernel);
        Eigen::MatrixXd M = K;
        M.diagonal().array() += cfg.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        for (const auto& v : vs) {
            if (v.size() != n) throw UsageError("residual operator: vector size mismatch");
            Eigen::VectorXd vv = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
            Eigen::VectorXd r = vv - K * checked_solve(ldlt, M, vv);
            out.emplace_back(r.data(), r.data() + n);
        }
    }
    return out;
}

RidgeModel::RidgeModel(const Dataset& training, RidgeConfig cfg) : cfg_(std::move(cfg)) {
    validate_ridge(cfg_);
    if (training.is_classification())
        throw UsageError("ridge model needs a regression dataset");
    if (training.empty()) throw UsageError("ridge model needs at least one example");

    const std::size_t n = training.size();
    Eigen::VectorXd y(n);
    objects_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        objects_.push_back(training[i].object);
        y(i) = training[i].label.value();
    }

    Eigen::VectorXd coef;
    if (!cfg_.kernel) {
        Eigen::MatrixXd X = design_matrix(objects_);
        Eigen::MatrixXd M = X.transpose() * X;
        M.diagonal().array() += cfg_.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        coef = checked_solve(ldlt, M, X.transpose() * y);
        objects_.clear();  // primal predicts from weights alone
    } else {
        Eigen::MatrixXd K = kernel_matrix(objects_, *cfg_.kernel);
        Eigen::MatrixXd M = K;
        M.diagonal().array() += cfg_.a;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        detail::require_well_conditioned(ldlt);
        coef = checked_solve(ldlt, M, y);
    }
    coef_.assign(coef.data(), coef.data() + coef.size());
}

double RidgeModel::predict(const std::vector<double>& object) const {
    if (!cfg_.kernel) {
        if (object.size() != coef_.size()) throw UsageError("ridge predict: dimension mismatch");
        double s = 0.0;
        for (std::size_t j = 0; j < coef_.size(); ++j) s += coef_[j] * object[j];
        return s;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < objects_.size(); ++j)
        s += coef_[j] * (*cfg_.kernel)(objects_[j], object);
    return s;
}

}  // namespace conformal
