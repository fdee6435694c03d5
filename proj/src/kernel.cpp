#include "conformal/kernel.hpp"

#include <cmath>

#include "conformal/dataset.hpp"

namespace conformal {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double sq_euclid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

}  // namespace

KernelSpec KernelSpec::linear() {
    return KernelSpec(Kind::Linear, 0, 0.0, 0.0);
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    if (degree < 1) throw UsageError("polynomial kernel degree must be positive");
    return KernelSpec(Kind::Polynomial, degree, offset, 0.0);
}

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0)) throw UsageError("rbf kernel gamma must be positive");
    return KernelSpec(Kind::Rbf, 0, 0.0, gamma);
}

double KernelSpec::operator()(const std::vector<double>& x, const std::vector<double>& y) const {
    if (x.size() != y.size()) throw UsageError("kernel arguments differ in dimension");
    switch (kind_) {
        case Kind::Linear:
            return dot(x, y);
        case Kind::Polynomial:
            return std::pow(dot(x, y) + offset_, degree_);
        case Kind::Rbf:
            return std::exp(-gamma_ * sq_euclid(x, y));
    }
    return 0.0;
}

double KernelSpec::distance(const std::vector<double>& x, const std::vector<double>& y) const {
    // (kxx + kyy) first so that swapping the arguments is bit-identical.
    double kxx = (*this)(x, x);
    double kyy = (*this)(y, y);
    double kxy = (*this)(x, y);
    double q = (kxx + kyy) - 2.0 * kxy;
    return std::sqrt(q > 0.0 ? q : 0.0);
}

}  // namespace conformal
