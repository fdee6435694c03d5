#include "conformal/icp.hpp"

#include <algorithm>
#include <limits>
#include <memory>

#include "conformal/ridge.hpp"

namespace conformal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Learner kernel_ridge_learner(RidgeConfig cfg) {
    return [cfg](const Dataset& proper) -> PredictionRule {
        auto model = std::make_shared<RidgeModel>(proper, cfg);
        return [model](const std::vector<double>& object) {
            return Label::of_real(model->predict(object));
        };
    };
}

Learner nearest_neighbor_learner(KernelSpec kernel) {
    return [kernel](const Dataset& proper) -> PredictionRule {
        if (proper.empty()) throw UsageError("nearest-neighbour learner needs data");
        auto examples = std::make_shared<std::vector<Example>>(proper.examples());
        return [examples, kernel](const std::vector<double>& object) {
            std::size_t best = 0;
            double best_d = kInf;
            for (std::size_t i = 0; i < examples->size(); ++i) {
                double d = kernel.distance((*examples)[i].object, object);
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            return (*examples)[best].label;
        };
    };
}

std::size_t icp_default_split(std::size_t l) {
    std::size_t m = (2 * l + 2) / 3;  // ceil(2l/3)
    return std::min(m, l - 1);
}

IcpModel icp_fit(const Dataset& training, std::size_t split_m, const Learner& learner,
                 Discrepancy delta) {
    const std::size_t l = training.size();
    if (l < 2) throw UsageError("icp_fit needs at least two training examples");
    if (split_m < 1 || split_m >= l)
        throw UsageError("icp_fit: split must satisfy 1 <= m < l");

    Dataset proper(training.dim(), training.label_space());
    for (std::size_t i = 0; i < split_m; ++i) proper.add(training[i]);

    IcpModel model;
    model.rule = learner(proper);
    model.delta = delta;
    model.proper_size = split_m;
    model.space = training.label_space();
    model.calibration_scores.reserve(l - split_m);
    for (std::size_t i = split_m; i < l; ++i) {
        model.calibration_scores.push_back(
            discrepancy(delta, training[i].label, model.rule(training[i].object)));
    }
    std::sort(model.calibration_scores.begin(), model.calibration_scores.end());
    return model;
}

double icp_p_value(const IcpModel& model, const std::vector<double>& object,
                   const Label& candidate) {
    const auto& cal = model.calibration_scores;
    if (cal.empty()) throw UsageError("icp_p_value: model has no calibration scores");
    double test = discrepancy(model.delta, candidate, model.rule(object));
    auto first_ge = std::lower_bound(cal.begin(), cal.end(), test);
    std::size_t ge = static_cast<std::size_t>(cal.end() - first_ge);
    return static_cast<double>(ge + 1) / static_cast<double>(cal.size() + 1);
}

PredictionSet icp_predict(const IcpModel& model, const std::vector<double>& object,
                          Epsilon eps) {
    const auto& cal = model.calibration_scores;
    if (cal.empty()) throw UsageError("icp_predict: model has no calibration scores");

    if (model.space.kind() == LabelKind::Class) {
        std::vector<int> ids;
        for (std::size_t y = 0; y < model.space.n_classes(); ++y) {
            Label cand = Label::of_class(static_cast<int>(y));
            if (icp_p_value(model, object, cand) > eps.value()) ids.push_back(static_cast<int>(y));
        }
        return PredictionSet::of_labels(std::move(ids));
    }

    if (model.delta != Discrepancy::AbsoluteError)
        throw UsageError("closed-form regression intervals need the absolute-error discrepancy");

    // p(alpha) > eps  <=>  g = #{cal >= alpha} reaches the smallest count K
    // with (K+1)/n > eps; K is found on the exact double comparison so the
    // interval agrees with icp_p_value everywhere, ties included.
    const std::size_t c = cal.size();
    const double n = static_cast<double>(c + 1);
    auto qualifies = [&](std::size_t g) {
        return (static_cast<double>(g) + 1.0) / n > eps.value();
    };
    std::size_t lo = 0, hi = c + 1;  // qualifies(c + 1) always holds
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (qualifies(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    const std::size_t K = lo;
    double center = model.rule(object).value();
    if (K == 0)
        return PredictionSet::of_intervals({Interval{-kInf, kInf}});
    if (K > c)
        return PredictionSet::of_intervals({});
    double q = cal[c - K];
    return PredictionSet::of_intervals({Interval{center - q, center + q}});
}

}  // namespace conformal
