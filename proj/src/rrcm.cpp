#include "conformal/rrcm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "conformal/ridge.hpp"

namespace conformal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDedupeTol = 1e-12;

// p(y) evaluated once per critical point and once per open segment between
// them; p is constant on the open segments.
struct PiecewiseP {
    std::vector<double> points;     // sorted, deduplicated
    std::vector<double> at_point;   // p at points[i]
    std::vector<double> between;    // p on the open segments; size points+1
};

PiecewiseP build_piecewise(const std::vector<ResidualLine>& lines) {
    PiecewiseP pw;
    pw.points = rrcm_critical_points(lines);
    const std::size_t m = pw.points.size();

    pw.at_point.resize(m);
    for (std::size_t i = 0; i < m; ++i) pw.at_point[i] = rrcm_p_value_at(lines, pw.points[i]);

    pw.between.resize(m + 1);
    if (m == 0) {
        pw.between[0] = rrcm_p_value_at(lines, 0.0);
        return pw;
    }
    pw.between[0] = rrcm_p_value_at(lines, pw.points.front() - 1.0);
    for (std::size_t i = 0; i + 1 < m; ++i)
        pw.between[i + 1] = rrcm_p_value_at(lines, 0.5 * (pw.points[i] + pw.points[i + 1]));
    pw.between[m] = rrcm_p_value_at(lines, pw.points.back() + 1.0);
    return pw;
}

RegressionPrediction prediction_from_piecewise(const PiecewiseP& pw, Epsilon eps) {
    const double e = eps.value();
    const std::size_t m = pw.points.size();

    // Walk the alternating segments (-inf,c0), {c0}, (c0,c1), ..., (c_{m-1},inf)
    // merging consecutive qualifying segments into maximal closed intervals.
    std::vector<Interval> intervals;
    bool open = false;
    double lo = 0.0, hi = 0.0;
    auto enter = [&](double seg_lo) {
        if (!open) {
            open = true;
            lo = seg_lo;
        }
    };
    auto leave = [&]() {
        if (open) {
            intervals.push_back(Interval{lo, hi});
            open = false;
        }
    };

    for (std::size_t i = 0; i <= m; ++i) {
        if (pw.between[i] > e) {
            enter(i == 0 ? -kInf : pw.points[i - 1]);
            hi = (i == m) ? kInf : pw.points[i];
        } else {
            leave();
        }
        if (i < m) {
            if (pw.at_point[i] > e) {
                enter(pw.points[i]);
                hi = pw.points[i];
            } else {
                leave();
            }
        }
    }
    leave();

    // Rounding at a multiple root can make two pieces touch; merge them so
    // the interval union stays strictly disjoint.
    std::vector<Interval> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            if (iv.hi > merged.back().hi) merged.back().hi = iv.hi;
        } else {
            merged.push_back(iv);
        }
    }

    RegressionPrediction out{PredictionSet::of_intervals(merged), std::nullopt};
    if (!merged.empty())
        out.hull = Interval{merged.front().lo, merged.back().hi};
    return out;
}

}  // namespace

std::vector<ResidualLine> residual_lines(const Dataset& training,
                                         const std::vector<double>& object,
                                         const RidgeConfig& cfg) {
    validate_ridge(cfg);
    if (training.is_classification())
        throw UsageError("residual_lines needs a regression dataset");
    if (training.empty())
        throw UsageError("residual_lines needs at least one training example");
    if (object.size() != training.dim())
        throw UsageError("residual_lines: object dimension mismatch");

    const std::size_t l = training.size();
    const std::size_t n = l + 1;
    std::vector<std::vector<double>> objects;
    objects.reserve(n);
    for (std::size_t i = 0; i < l; ++i) objects.push_back(training[i].object);
    objects.push_back(object);

    std::vector<double> y0(n, 0.0);
    std::vector<double> e_last(n, 0.0);
    for (std::size_t i = 0; i < l; ++i) y0[i] = training[i].label.value();
    e_last[l] = 1.0;

    auto ab = residual_operator_apply(objects, {y0, e_last}, cfg);
    std::vector<ResidualLine> lines(n);
    for (std::size_t i = 0; i < n; ++i) lines[i] = ResidualLine{ab[0][i], ab[1][i]};
    return lines;
}

double rrcm_p_value_at(const std::vector<ResidualLine>& lines, double y) {
    const std::size_t n = lines.size();
    const double t = std::fabs(lines[n - 1].a + lines[n - 1].b * y);
    std::size_t ge = 0;
    for (const auto& ln : lines) {
        if (std::fabs(ln.a + ln.b * y) >= t) ++ge;
    }
    return static_cast<double>(ge) / static_cast<double>(n);
}

std::vector<double> rrcm_critical_points(const std::vector<ResidualLine>& lines) {
    const std::size_t n = lines.size();
    if (n == 0) throw UsageError("rrcm_critical_points: no lines");
    const ResidualLine test = lines[n - 1];

    // |a_i + b_i y| = |a_n + b_n y| factors into two linear equations; a
    // factor with zero slope contributes no breakpoint (constant sign).
    std::vector<double> points;
    points.reserve(2 * n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double sd = lines[i].b - test.b, id = lines[i].a - test.a;
        double ss = lines[i].b + test.b, is = lines[i].a + test.a;
        if (sd != 0.0) {
            double r = -id / sd;
            if (std::isfinite(r)) points.push_back(r);
        }
        if (ss != 0.0) {
            double r = -is / ss;
            if (std::isfinite(r)) points.push_back(r);
        }
    }
    std::sort(points.begin(), points.end());
    std::vector<double> dedup;
    dedup.reserve(points.size());
    for (double v : points) {
        if (dedup.empty() || v - dedup.back() > kDedupeTol) dedup.push_back(v);
    }
    return dedup;
}

RegressionPrediction exact_interval(const std::vector<ResidualLine>& lines, Epsilon eps) {
    if (lines.empty()) throw UsageError("exact_interval: no lines");
    return prediction_from_piecewise(build_piecewise(lines), eps);
}

std::vector<RegressionPrediction> rrcm_predict(const Dataset& training,
                                               const std::vector<double>& object,
                                               const RidgeConfig& cfg,
                                               const std::vector<Epsilon>& eps_list) {
    auto lines = residual_lines(training, object, cfg);
    PiecewiseP pw = build_piecewise(lines);
    std::vector<RegressionPrediction> out;
    out.reserve(eps_list.size());
    for (const Epsilon& eps : eps_list) out.push_back(prediction_from_piecewise(pw, eps));
    return out;
}

namespace serial {

std::vector<std::vector<RegressionPrediction>> rrcm_predict_batch(
    const Dataset& training, const std::vector<std::vector<double>>& objects,
    const RidgeConfig& cfg, const std::vector<Epsilon>& eps_list) {
    std::vector<std::vector<RegressionPrediction>> out;
    out.reserve(objects.size());
    for (const auto& obj : objects) out.push_back(rrcm_predict(training, obj, cfg, eps_list));
    return out;
}

}  // namespace serial

std::vector<std::vector<RegressionPrediction>> rrcm_predict_batch(
    const Dataset& training, const std::vector<std::vector<double>>& objects,
    const RidgeConfig& cfg, const std::vector<Epsilon>& eps_list) {
    std::vector<std::vector<RegressionPrediction>> out(objects.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(objects.size()); ++i) {
        try {
            out[i] = rrcm_predict(training, objects[i], cfg, eps_list);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace conformal
