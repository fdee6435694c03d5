#include "doctest.h"

#include <cmath>

#include "conformal/bayes.hpp"
#include "conformal/rng.hpp"

using namespace conformal;

TEST_CASE("generate: sizes and determinism") {
    LinearModelSpec spec;
    spec.p = 3;

    SUBCASE("empty datasets are legal") {
        auto [train, test] = generate(spec, 0, 0, 1);
        CHECK(train.size() == 0);
        CHECK(test.size() == 0);
    }

    SUBCASE("same seed reproduces bitwise") {
        auto [t1, s1] = generate(spec, 20, 10, 42);
        auto [t2, s2] = generate(spec, 20, 10, 42);
        REQUIRE(t1.size() == t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i) {
            CHECK(t1[i].object == t2[i].object);
            CHECK(t1[i].label.value() == t2[i].label.value());
        }
        CHECK(s1[5].object == s2[5].object);
    }

    SUBCASE("objects respect the sampling box") {
        auto [train, test] = generate(spec, 200, 0, 3);
        for (std::size_t i = 0; i < train.size(); ++i) {
            for (double v : train[i].object) {
                CHECK(v >= -10.0);
                CHECK(v <= 10.0);
            }
        }
    }
}

TEST_CASE("generate: unit label noise") {
    // with a huge true precision the weights are ~0, so Var(y) ~ noise variance
    LinearModelSpec spec;
    spec.p = 1;
    spec.a_true = 1e12;
    auto [train, test] = generate(spec, 100000, 0, 9);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double y = train[i].label.value();
        sum += y;
        sq += y * y;
    }
    double mean = sum / train.size();
    double var = sq / train.size() - mean * mean;
    CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("bayes_interval: prior-only predictive") {
    Dataset empty(3, LabelSpace::real_line());
    // |x0|^2 = 3, a = 1: predictive variance 1 + 3 = 4
    Interval iv = bayes_interval(empty, {1.0, 1.0, 1.0}, 1.0, Epsilon(0.05));
    CHECK(iv.lo == doctest::Approx(-1.959964 * 2.0).epsilon(1e-4));
    CHECK(iv.hi == doctest::Approx(1.959964 * 2.0).epsilon(1e-4));
}

TEST_CASE("bayes_interval: standard normal quantile width") {
    Dataset empty(1, LabelSpace::real_line());
    // x0 tiny: predictive is ~N(0,1)
    Interval iv = bayes_interval(empty, {1e-9}, 1.0, Epsilon(0.05));
    CHECK(iv.hi == doctest::Approx(1.959964).epsilon(1e-4));
}

TEST_CASE("bayes_interval: huge assumed precision recovers the prior") {
    RngStream g(3);
    Dataset train(2, LabelSpace::real_line());
    for (int i = 0; i < 50; ++i)
        train.add({g.next_in(-10, 10), g.next_in(-10, 10)},
                  Label::of_real(g.next_normal() * 5.0));
    Interval iv = bayes_interval(train, {1.0, 1.0}, 1e12, Epsilon(0.05));
    double mid = 0.5 * (iv.lo + iv.hi);
    CHECK(std::fabs(mid) < 1e-6);                          // mean shrunk to 0
    CHECK(iv.hi == doctest::Approx(1.959964).epsilon(1e-3));  // variance ~ 1
}

TEST_CASE("bayes_interval: singular system fails loudly") {
    Dataset train(2, LabelSpace::real_line());
    train.add({1.0, 1.0}, Label::of_real(1.0));
    CHECK_THROWS_AS(bayes_interval(train, {1.0, 1.0}, 0.0, Epsilon(0.05)), NumericError);
}

TEST_CASE("default level grid") {
    auto levels = default_levels();
    REQUIRE(levels.size() == 50);
    CHECK(levels.front() == doctest::Approx(0.5));
    CHECK(levels.back() == doctest::Approx(0.995));
    for (std::size_t i = 1; i < levels.size(); ++i) CHECK(levels[i] > levels[i - 1]);
}

TEST_CASE("comparison curves: small smoke run is deterministic and sane") {
    ExperimentGrid grid;
    grid.levels = {0.8, 0.9};
    grid.trials = 2;
    grid.train_size = 30;
    grid.test_size = 20;
    grid.a_values = {1.0};

    LinearModelSpec spec;
    spec.p = 2;

    auto c1 = run_bayes_comparison(grid, spec, 7);
    auto c2 = run_bayes_comparison(grid, spec, 7);
    CHECK(c1.rrcm_miscoverage == c2.rrcm_miscoverage);
    CHECK(c1.bayes_mean_width == c2.bayes_mean_width);

    for (std::size_t lv = 0; lv < grid.levels.size(); ++lv) {
        CHECK(c1.rrcm_miscoverage[0][lv] <= 1.0);
        CHECK(c1.rrcm_mean_width[0][lv] > 0.0);
        CHECK(c1.bayes_mean_width[0][lv] > 0.0);
    }
    // higher confidence, wider intervals
    CHECK(c1.rrcm_mean_width[0][1] >= c1.rrcm_mean_width[0][0]);
    CHECK(c1.bayes_mean_width[0][1] >= c1.bayes_mean_width[0][0]);
}
