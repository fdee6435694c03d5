#pragma once

#include <vector>

namespace conformal {

// Kernel used both for feature-space distances and for kernel ridge fits.
class KernelSpec {
public:
    enum class Kind { Linear, Polynomial, Rbf };

    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset);
    static KernelSpec rbf(double gamma);

    Kind kind() const { return kind_; }
    int degree() const { return degree_; }
    double offset() const { return offset_; }
    double gamma() const { return gamma_; }

    double operator()(const std::vector<double>& x, const std::vector<double>& y) const;

    // Feature-space distance sqrt(K(x,x) - 2 K(x,x') + K(x',x')); the
    // quadratic form is clamped at 0 before the square root.
    double distance(const std::vector<double>& x, const std::vector<double>& y) const;

private:
    KernelSpec(Kind kind, int degree, double offset, double gamma)
        : kind_(kind), degree_(degree), offset_(offset), gamma_(gamma) {}
    Kind kind_;
    int degree_;
    double offset_;
    double gamma_;
};

}  // namespace conformal
