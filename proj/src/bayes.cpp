#include "conformal/bayes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <exception>

#include "ldlt_check.hpp"

#include "conformal/rng.hpp"
#include "conformal/rrcm.hpp"

namespace conformal {

namespace {

void validate_spec(const LinearModelSpec& spec) {
    if (spec.p < 1) throw UsageError("linear model needs dimension >= 1");
    if (!(spec.a_true > 0.0)) throw UsageError("linear model needs a_true > 0");
    if (!(spec.x_low < spec.x_high)) throw UsageError("linear model needs x_low < x_high");
    if (!(spec.noise_sd >= 0.0)) throw UsageError("linear model needs noise_sd >= 0");
}

// Posterior-predictive mean and standard deviation with one factorization
// shared across test objects.
class BayesPredictive {
public:
    BayesPredictive(const Dataset& training, double a_assumed) {
        if (training.is_classification())
            throw UsageError("bayes_interval needs a regression dataset");
        if (a_assumed < 0.0) throw UsageError("bayes_interval needs a_assumed >= 0");
        const std::size_t l = training.size();
        const std::size_t p = training.dim();
        Eigen::MatrixXd X(l, p);
        Eigen::VectorXd y(l);
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t j = 0; j < p; ++j) X(i, j) = training[i].object[j];
            y(i) = training[i].label.value();
        }
        Eigen::MatrixXd M = X.transpose() * X;
        M.diagonal().array() += a_assumed;
        ldlt_.compute(M);
        detail::require_well_conditioned(ldlt_);
        mean_coef_ = ldlt_.solve(X.transpose() * y);
        if (!mean_coef_.allFinite())
            throw NumericError("singular system in Bayes predictive (a_assumed too small?)");
    }

    void at(const std::vector<double>& object, double& mu, double& sd) const {
        Eigen::Map<const Eigen::VectorXd> x0(object.data(), object.size());
        Eigen::VectorXd z = ldlt_.solve(x0);
        if (!z.allFinite()) throw NumericError("singular system in Bayes predictive");
        mu = mean_coef_.dot(x0);
        double var = 1.0 + x0.dot(z);
        sd = std::sqrt(var);
    }

private:
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
    Eigen::VectorXd mean_coef_;
};

}  // namespace

std::pair<Dataset, Dataset> generate(const LinearModelSpec& spec, std::size_t l, std::size_t k,
                                     std::uint64_t seed) {
    validate_spec(spec);
    RngStream g(seed);

    std::vector<double> w(spec.p);
    const double w_sd = 1.0 / std::sqrt(spec.a_true);
    for (auto& wi : w) wi = w_sd * g.next_normal();

    auto draw = [&](Dataset& out, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<double> x(spec.p);
            for (auto& xi : x) xi = g.next_in(spec.x_low, spec.x_high);
            double y = spec.noise_sd * g.next_normal();
            for (std::size_t j = 0; j < spec.p; ++j) y += w[j] * x[j];
            out.add(std::move(x), Label::of_real(y));
        }
    };

    Dataset train(spec.p, LabelSpace::real_line());
    Dataset test(spec.p, LabelSpace::real_line());
    draw(train, l);
    draw(test, k);
    return {std::move(train), std::move(test)};
}

Interval bayes_interval(const Dataset& training, const std::vector<double>& object,
                        double a_assumed, Epsilon eps) {
    if (object.size() != training.dim())
        throw UsageError("bayes_interval: object dimension mismatch");
    BayesPredictive model(training, a_assumed);
    double mu, sd;
    model.at(object, mu, sd);
    double z = normal_quantile(1.0 - eps.value() / 2.0);
    return Interval{mu - z * sd, mu + z * sd};
}

std::vector<double> default_levels() {
    std::vector<double> levels(50);
    for (std::size_t i = 0; i < levels.size(); ++i)
        levels[i] = 0.5 + (0.995 - 0.5) * static_cast<double>(i) / 49.0;
    return levels;
}

ComparisonCurves run_bayes_comparison(const ExperimentGrid& grid, const LinearModelSpec& spec,
                                      std::uint64_t seed) {
    validate_spec(spec);
    if (grid.levels.empty()) throw UsageError("comparison grid needs at least one level");
    for (double lv : grid.levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw UsageError("confidence levels must lie in (0, 1)");
    }
    if (grid.trials < 1 || grid.test_size < 1 || grid.train_size < 1)
        throw UsageError("comparison grid needs positive sizes");

    const std::size_t n_levels = grid.levels.size();
    const std::size_t n_a = grid.a_values.size();
    std::vector<Epsilon> eps_list;
    eps_list.reserve(n_levels);
    for (double lv : grid.levels) eps_list.emplace_back(1.0 - lv);

    ComparisonCurves curves;
    curves.levels = grid.levels;
    curves.a_values = grid.a_values;
    curves.rrcm_miscoverage.assign(n_a, std::vector<double>(n_levels, 0.0));
    curves.rrcm_mean_width.assign(n_a, std::vector<double>(n_levels, 0.0));
    curves.bayes_miscoverage.assign(n_a, std::vector<double>(n_levels, 0.0));
    curves.bayes_mean_width.assign(n_a, std::vector<double>(n_levels, 0.0));

    std::vector<std::vector<std::size_t>> rrcm_out(n_a, std::vector<std::size_t>(n_levels, 0));
    std::vector<std::vector<std::size_t>> bayes_out(n_a, std::vector<std::size_t>(n_levels, 0));

    for (std::size_t trial = 0; trial < grid.trials; ++trial) {
        auto [train, test] = generate(spec, grid.train_size, grid.test_size,
                                      mix_seed(seed, trial));
        const std::size_t kt = test.size();

        for (std::size_t ai = 0; ai < n_a; ++ai) {
            const double a = grid.a_values[ai];
            RidgeConfig ridge_cfg{a, std::nullopt};
            BayesPredictive bayes(train, a);

            // Per-object results land in slots; reductions stay serial so the
            // curves are byte-stable regardless of scheduling.
            std::vector<std::uint8_t> r_out(kt * n_levels), b_out(kt * n_levels);
            std::vector<double> r_w(kt * n_levels), b_w(kt * n_levels);

            std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(kt); ++i) {
                try {
                    const auto& obj = test[i].object;
                    const double truth = test[i].label.value();
                    auto preds = rrcm_predict(train, obj, ridge_cfg, eps_list);
                    double mu, sd;
                    bayes.at(obj, mu, sd);
                    for (std::size_t lv = 0; lv < n_levels; ++lv) {
                        const auto& hull = preds[lv].hull;
                        bool inside = hull && hull->contains(truth);
                        r_out[i * n_levels + lv] = inside ? 0 : 1;
                        r_w[i * n_levels + lv] = hull ? hull->width() : 0.0;

                        double z = normal_quantile(1.0 - eps_list[lv].value() / 2.0);
                        Interval biv{mu - z * sd, mu + z * sd};
                        b_out[i * n_levels + lv] = biv.contains(truth) ? 0 : 1;
                        b_w[i * n_levels + lv] = biv.width();
                    }
                } catch (...) {
#pragma omp critical
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);

            for (std::size_t i = 0; i < kt; ++i) {
                for (std::size_t lv = 0; lv < n_levels; ++lv) {
                    rrcm_out[ai][lv] += r_out[i * n_levels + lv];
                    bayes_out[ai][lv] += b_out[i * n_levels + lv];
                    curves.rrcm_mean_width[ai][lv] += r_w[i * n_levels + lv];
                    curves.bayes_mean_width[ai][lv] += b_w[i * n_levels + lv];
                }
            }
        }
    }

    const double total = static_cast<double>(grid.trials * grid.test_size);
    for (std::size_t ai = 0; ai < n_a; ++ai) {
        for (std::size_t lv = 0; lv < n_levels; ++lv) {
            curves.rrcm_miscoverage[ai][lv] = rrcm_out[ai][lv] / total;
            curves.bayes_miscoverage[ai][lv] = bayes_out[ai][lv] / total;
            curves.rrcm_mean_width[ai][lv] /= total;
            curves.bayes_mean_width[ai][lv] /= total;
        }
    }
    return curves;
}

}  // namespace conformal
