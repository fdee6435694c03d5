#include "doctest.h"

#include <cmath>

// The OpenMP kernels must be bit-identical to their serial references: every
// parallel unit owns its output slot and no reduction order differs.

#include "conformal/nonconformity.hpp"
#include "conformal/predictor.hpp"
#include "conformal/rng.hpp"
#include "conformal/rrcm.hpp"

using namespace conformal;

namespace {

Dataset random_class_dataset(RngStream& g, std::size_t n, std::size_t dim, std::size_t classes) {
    std::vector<std::string> symbols;
    for (std::size_t c = 0; c < classes; ++c) symbols.push_back(std::string(1, char('A' + c)));
    Dataset data(dim, LabelSpace::alphabet(symbols));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(dim);
        for (auto& v : x) v = std::floor(g.next_in(-4.0, 4.0));
        data.add(std::move(x), Label::of_class(static_cast<int>(g.next_u64() % classes)));
    }
    return data;
}

Dataset random_regression(RngStream& g, std::size_t n, std::size_t p) {
    Dataset data(p, LabelSpace::real_line());
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(p);
        for (auto& v : x) v = g.next_in(-2.0, 2.0);
        data.add(std::move(x), Label::of_real(g.next_in(-3.0, 3.0)));
    }
    return data;
}

}  // namespace

TEST_CASE("knn_scores: parallel equals serial bitwise") {
    RngStream g(71);
    for (int rep = 0; rep < 25; ++rep) {
        std::size_t n = 2 + g.next_u64() % 40;
        Dataset data = random_class_dataset(g, n, 1 + g.next_u64() % 3, 2 + g.next_u64() % 3);
        KnnConfig cfg{1 + static_cast<int>(g.next_u64() % 4), KernelSpec::linear()};
        CHECK(knn_scores(data, cfg) == serial::knn_scores(data, cfg));
    }
}

TEST_CASE("classify_p_table: parallel equals serial bitwise") {
    RngStream g(72);
    for (int rep = 0; rep < 15; ++rep) {
        Dataset train = random_class_dataset(g, 3 + g.next_u64() % 15, 2, 3);
        std::vector<double> object{g.next_in(-4, 4), g.next_in(-4, 4)};
        Measure measure = make_knn_measure(KnnConfig{1, KernelSpec::linear()});

        for (bool smoothed : {false, true}) {
            SmoothingTape tape(100 + rep);
            RngStream s1 = tape.substream(1);
            RngStream s2 = tape.substream(1);
            PValueTable par = classify_p_table(train, object, measure, smoothed, s1);
            PValueTable ser = serial::classify_p_table(train, object, measure, smoothed, s2);
            CHECK(par.p == ser.p);
        }
    }
}

TEST_CASE("knn_p_table equals the generic table on the same tape") {
    RngStream g(73);
    for (int rep = 0; rep < 15; ++rep) {
        std::size_t classes = 2 + g.next_u64() % 3;
        Dataset train = random_class_dataset(g, 1 + g.next_u64() % 12, 2, classes);
        std::vector<double> object{g.next_in(-4, 4), g.next_in(-4, 4)};
        KnnConfig cfg{1 + static_cast<int>(g.next_u64() % 3), KernelSpec::linear()};

        KnnScorer scorer(cfg, 2, classes);
        for (std::size_t i = 0; i < train.size(); ++i)
            scorer.add(train[i].object, train[i].label.class_id());

        for (bool smoothed : {false, true}) {
            SmoothingTape tape(500 + rep);
            RngStream s1 = tape.substream(3);
            RngStream s2 = tape.substream(3);
            PValueTable fast =
                knn_p_table(scorer, train.label_space().symbols(), object, smoothed, s1);
            PValueTable slow =
                classify_p_table(train, object, make_knn_measure(cfg), smoothed, s2);
            CHECK(fast.p == slow.p);
        }
    }
}

TEST_CASE("rrcm_predict_batch: parallel equals serial") {
    RngStream g(74);
    Dataset train = random_regression(g, 15, 2);
    std::vector<std::vector<double>> objects;
    for (int i = 0; i < 12; ++i) objects.push_back({g.next_in(-2, 2), g.next_in(-2, 2)});
    std::vector<Epsilon> eps{Epsilon(0.1), Epsilon(0.3)};
    RidgeConfig cfg{1.0, std::nullopt};

    auto par = rrcm_predict_batch(train, objects, cfg, eps);
    auto ser = serial::rrcm_predict_batch(train, objects, cfg, eps);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        for (std::size_t e = 0; e < eps.size(); ++e) {
            REQUIRE(par[i][e].hull.has_value() == ser[i][e].hull.has_value());
            if (par[i][e].hull) {
                CHECK(par[i][e].hull->lo == ser[i][e].hull->lo);
                CHECK(par[i][e].hull->hi == ser[i][e].hull->hi);
            }
            REQUIRE(par[i][e].gamma.intervals().size() == ser[i][e].gamma.intervals().size());
        }
    }
}

TEST_CASE("parallel kernels propagate errors") {
    Dataset train(2, LabelSpace::real_line());
    train.add({1.0, 1.0}, Label::of_real(1.0));
    train.add({2.0, 2.0}, Label::of_real(2.0));
    std::vector<std::vector<double>> objects{{3.0, 3.0}, {4.0, 4.0}};
    CHECK_THROWS_AS(
        rrcm_predict_batch(train, objects, RidgeConfig{0.0, std::nullopt}, {Epsilon(0.1)}),
        NumericError);
}
