#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "conformal/icp.hpp"
#include "conformal/rng.hpp"

using namespace conformal;

namespace {

IcpModel model_with_scores(std::vector<double> cal) {
    IcpModel m;
    m.rule = [](const std::vector<double>& x) { return Label::of_real(x[0]); };
    m.calibration_scores = std::move(cal);
    std::sort(m.calibration_scores.begin(), m.calibration_scores.end());
    m.delta = Discrepancy::AbsoluteError;
    m.proper_size = 1;
    m.space = LabelSpace::real_line();
    return m;
}

Dataset linear_regression_data(RngStream& g, std::size_t n, std::size_t p, double noise) {
    Dataset data(p, LabelSpace::real_line());
    std::vector<double> w(p);
    for (auto& v : w) v = g.next_normal();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(p);
        for (auto& v : x) v = g.next_in(-2.0, 2.0);
        double y = noise * g.next_normal();
        for (std::size_t j = 0; j < p; ++j) y += w[j] * x[j];
        data.add(std::move(x), Label::of_real(y));
    }
    return data;
}

}  // namespace

TEST_CASE("icp_fit splits and calibrates") {
    SUBCASE("minimal split leaves one calibration score") {
        Dataset data(1, LabelSpace::real_line());
        data.add({1.0}, Label::of_real(1.0));
        data.add({2.0}, Label::of_real(5.0));
        IcpModel m = icp_fit(data, 1, kernel_ridge_learner(RidgeConfig{1.0, std::nullopt}),
                             Discrepancy::AbsoluteError);
        CHECK(m.calibration_scores.size() == 1);
        CHECK(m.proper_size == 1);
    }

    SUBCASE("constant learner yields |y - c| calibration scores") {
        Dataset data(1, LabelSpace::real_line());
        for (double y : {1.0, 4.0, -2.0, 0.5}) data.add({0.0}, Label::of_real(y));
        Learner constant = [](const Dataset&) -> PredictionRule {
            return [](const std::vector<double>&) { return Label::of_real(1.5); };
        };
        IcpModel m = icp_fit(data, 1, constant, Discrepancy::AbsoluteError);
        // calibration examples carry labels 4, -2, 0.5 -> |y - 1.5| sorted
        CHECK(m.calibration_scores == std::vector<double>{1.0, 2.5, 3.5});
    }

    SUBCASE("split bounds are enforced") {
        Dataset data(1, LabelSpace::real_line());
        data.add({1.0}, Label::of_real(1.0));
        data.add({2.0}, Label::of_real(2.0));
        auto learner = kernel_ridge_learner(RidgeConfig{1.0, std::nullopt});
        CHECK_THROWS_AS(icp_fit(data, 0, learner, Discrepancy::AbsoluteError), UsageError);
        CHECK_THROWS_AS(icp_fit(data, 2, learner, Discrepancy::AbsoluteError), UsageError);
    }
}

TEST_CASE("icp default split is ceil(2l/3) clamped below l") {
    CHECK(icp_default_split(2) == 1);
    CHECK(icp_default_split(3) == 2);
    CHECK(icp_default_split(4) == 3);
    CHECK(icp_default_split(6) == 4);
    CHECK(icp_default_split(100) == 67);
}

TEST_CASE("icp_p_value fixtures") {
    IcpModel m = model_with_scores({1.0, 2.0, 3.0});
    // rule predicts x[0]; candidate y gives test score |y - x0|
    auto p_of = [&](double alpha) {
        return icp_p_value(m, {0.0}, Label::of_real(alpha));
    };
    CHECK(p_of(2.5) == doctest::Approx(0.5));   // {3, itself} of 4
    CHECK(p_of(0.0) == doctest::Approx(1.0));   // below all
    CHECK(p_of(10.0) == doctest::Approx(0.25)); // strict max
    CHECK(p_of(2.0) == doctest::Approx(0.75));  // tie counts via >=
}

TEST_CASE("icp_p_value equals the naive count on random cases") {
    RngStream g(41);
    for (int rep = 0; rep < 1000; ++rep) {
        std::size_t c = 1 + g.next_u64() % 30;
        std::vector<double> cal(c);
        for (auto& v : cal) v = std::floor(g.next_in(0.0, 6.0));  // force ties
        IcpModel m = model_with_scores(cal);
        double alpha = std::floor(g.next_in(0.0, 6.0));

        std::size_t ge = 0;
        for (double s : m.calibration_scores) ge += (s >= alpha) ? 1 : 0;
        double naive = double(ge + 1) / double(c + 1);
        CHECK(icp_p_value(m, {0.0}, Label::of_real(alpha)) == naive);
    }
}

TEST_CASE("icp_predict: regression interval fixture") {
    IcpModel m = model_with_scores({1.0, 2.0, 3.0});
    PredictionSet set = icp_predict(m, {10.0}, Epsilon(0.5));
    REQUIRE(set.intervals().size() == 1);
    CHECK(set.intervals()[0].lo == doctest::Approx(8.0));
    CHECK(set.intervals()[0].hi == doctest::Approx(12.0));
}

TEST_CASE("icp_predict: tiny epsilon yields the infinite interval") {
    IcpModel m = model_with_scores({1.0, 2.0, 3.0});
    PredictionSet set = icp_predict(m, {0.0}, Epsilon(0.2));  // eps < 1/4
    REQUIRE(set.intervals().size() == 1);
    CHECK(!set.intervals()[0].bounded());
}

TEST_CASE("icp_predict agrees with the p-value definition on a fine grid") {
    RngStream g(42);
    for (int rep = 0; rep < 30; ++rep) {
        std::size_t c = 1 + g.next_u64() % 12;
        std::vector<double> cal(c);
        for (auto& v : cal) v = std::floor(g.next_in(0.0, 8.0)) * 0.5;
        IcpModel m = model_with_scores(cal);
        double eps = g.next_in(0.02, 0.9);
        PredictionSet set = icp_predict(m, {1.0}, Epsilon(eps));

        double span = m.calibration_scores.back() + 1.0;
        for (double y = 1.0 - span; y <= 1.0 + span; y += span / 400.0) {
            bool closed_form = set.contains_value(y);
            bool definition = icp_p_value(m, {1.0}, Label::of_real(y)) > eps;
            CHECK(closed_form == definition);
        }
    }
}

TEST_CASE("icp_predict: classification with a perfect calibration set") {
    Dataset data(1, LabelSpace::alphabet({"A", "B"}));
    data.add({-1.0}, Label::of_class(0));
    data.add({1.0}, Label::of_class(1));
    data.add({-2.0}, Label::of_class(0));
    data.add({2.0}, Label::of_class(1));
    IcpModel m = icp_fit(data, 2, nearest_neighbor_learner(), Discrepancy::ZeroOne);
    // 1-NN rule is perfect on calibration, so all calibration scores are 0
    CHECK(m.calibration_scores == std::vector<double>{0.0, 0.0});
    CHECK(icp_p_value(m, {-3.0}, Label::of_class(0)) == doctest::Approx(1.0));
    PredictionSet set = icp_predict(m, {-3.0}, Epsilon(0.4));
    CHECK(set.contains_class(0));
    CHECK(!set.contains_class(1));
}

TEST_CASE("icp classification sets are nested in epsilon") {
    RngStream g(43);
    Dataset data(1, LabelSpace::alphabet({"A", "B"}));
    for (int i = 0; i < 30; ++i) {
        double x = g.next_normal();
        data.add({x}, Label::of_class(x + 0.3 * g.next_normal() > 0 ? 1 : 0));
    }
    IcpModel m = icp_fit(data, 20, nearest_neighbor_learner(), Discrepancy::ZeroOne);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> obj{g.next_normal()};
        auto big = icp_predict(m, obj, Epsilon(0.1)).labels();
        auto small = icp_predict(m, obj, Epsilon(0.6)).labels();
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
}

TEST_CASE("icp coverage on held-out linear data") {
    RngStream g(44);
    const double eps = 0.2;
    std::size_t total = 0, covered = 0;
    for (int trial = 0; trial < 5; ++trial) {
        RngStream t(mix_seed(44, trial));
        Dataset all = linear_regression_data(t, 400, 2, 1.0);
        Dataset train(2, LabelSpace::real_line());
        for (std::size_t i = 0; i < 300; ++i) train.add(all[i]);
        IcpModel m = icp_fit(train, 200, kernel_ridge_learner(RidgeConfig{1.0, std::nullopt}),
                             Discrepancy::AbsoluteError);
        for (std::size_t i = 300; i < 400; ++i) {
            PredictionSet set = icp_predict(m, all[i].object, Epsilon(eps));
            ++total;
            if (set.contains(all[i].label)) ++covered;
        }
    }
    double rate = double(covered) / double(total);
    double sigma = std::sqrt(eps * (1 - eps) / double(total));
    CHECK(rate >= 1.0 - eps - 3.0 * sigma);
}
