#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conformal/predictor.hpp"

using namespace conformal;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PValueTable table_of(std::vector<std::string> labels, std::vector<double> p) {
    PValueTable t;
    t.labels = std::move(labels);
    t.p = std::move(p);
    return t;
}

std::vector<std::string> digit_labels() {
    std::vector<std::string> out;
    for (int d = 0; d < 10; ++d) out.push_back(std::to_string(d));
    return out;
}

}  // namespace

TEST_CASE("p_value fixtures") {
    CHECK(p_value({0.5, 0.5, 0.5}) == doctest::Approx(1.0));
    CHECK(p_value({1.0, 2.0, 4.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(p_value({3.0, 1.0, 2.0}) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(p_value({}), UsageError);
}

TEST_CASE("p_value floor is 1/n") {
    CHECK(p_value({5.0}) == doctest::Approx(1.0));
    CHECK(p_value({1.0, 2.0, 3.0, 100.0}) == doctest::Approx(0.25));
}

TEST_CASE("smoothed p_value fixtures") {
    CHECK(smoothed_p_value({1.0, 1.0}, 0.5) == doctest::Approx(0.5));
    CHECK(smoothed_p_value({1.0, 2.0}, 1.0) == doctest::Approx(0.5));
    CHECK(smoothed_p_value({1.0, 2.0}, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(smoothed_p_value({1.0}, 1.5), UsageError);
    CHECK_THROWS_AS(smoothed_p_value({1.0}, -0.1), UsageError);
}

TEST_CASE("smoothed p_value with eta = 1 recovers the plain p-value") {
    RngStream g(21);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 1 + g.next_u64() % 8;
        Scores s(n);
        for (auto& v : s) {
            std::uint64_t r = g.next_u64() % 5;
            v = r == 4 ? kInf : static_cast<double>(r);  // heavy ties, some infinities
        }
        CHECK(smoothed_p_value(s, 1.0) == p_value(s));
        CHECK(p_value(s) >= 1.0 / static_cast<double>(n));  // self-count floor
        CHECK(p_value(s) <= 1.0);
    }
}

TEST_CASE("infinite scores rank above finite ones and tie among themselves") {
    CHECK(p_value({kInf, 1.0, kInf}) == doctest::Approx(2.0 / 3.0));
    CHECK(smoothed_p_value({kInf, 1.0, kInf}, 0.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("classify_p_table over a one-example training set gives all-one p-values") {
    Dataset train(1, LabelSpace::alphabet({"A", "B"}));
    train.add({0.0}, Label::of_class(0));
    RngStream tape(1);
    PValueTable t = classify_p_table(train, {0.0}, make_knn_measure(KnnConfig{}), false, tape);
    CHECK(t.p[0] == doctest::Approx(1.0));
    CHECK(t.p[1] == doctest::Approx(1.0));
}

TEST_CASE("classify_p_table: candidate scoring as strict max gives 1/n") {
    // synthetic measure: candidate label B gets the strictly largest score
    Dataset train(1, LabelSpace::alphabet({"A", "B", "C"}));
    for (int i = 0; i < 4; ++i) train.add({double(i)}, Label::of_class(0));
    Measure rigged = [](const Dataset& seq) {
        Scores s(seq.size(), 1.0);
        if (seq[seq.size() - 1].label.class_id() == 1) s.back() = 9.0;
        return s;
    };
    RngStream tape(1);
    PValueTable t = classify_p_table(train, {9.0}, rigged, false, tape);
    CHECK(t.p[1] == doctest::Approx(0.2));  // strict max of 5
    CHECK(t.p[0] == doctest::Approx(1.0));
    CHECK(t.p[2] == doctest::Approx(1.0));
}

TEST_CASE("classify_p_table covers the whole alphabet") {
    std::vector<std::string> labels = digit_labels();
    Dataset train(1, LabelSpace::alphabet(labels));
    train.add({0.0}, Label::of_class(0));
    train.add({1.0}, Label::of_class(1));
    RngStream tape(3);
    PValueTable t = classify_p_table(train, {0.5}, make_knn_measure(KnnConfig{}), false, tape);
    CHECK(t.size() == 10);
    CHECK(t.labels == labels);
}

TEST_CASE("prediction sets from the clinical p-value fixture") {
    // nine diagnostic groups, p-values in percent
    PValueTable t = table_of(
        {"APP", "DIV", "PPU", "NAP", "CHO", "INO", "PAN", "RCO", "DYS"},
        {0.0123, 0.0036, 0.0016, 0.0283, 0.0572, 0.0089, 0.0137, 0.0048, 0.8056});

    auto symbols_of = [&](const PredictionSet& s) {
        std::vector<std::string> out;
        for (int id : s.labels()) out.push_back(t.labels[id]);
        return out;
    };

    CHECK(symbols_of(prediction_set(t, Epsilon(0.05))) ==
          std::vector<std::string>{"CHO", "DYS"});
    CHECK(symbols_of(prediction_set(t, Epsilon(0.10))) == std::vector<std::string>{"DYS"});
    CHECK(symbols_of(prediction_set(t, Epsilon(0.01))) ==
          std::vector<std::string>{"APP", "NAP", "CHO", "PAN", "DYS"});
}

TEST_CASE("summarize on the digit p-value fixtures") {
    std::vector<std::string> labels = digit_labels();

    ConfidenceCredibility row1 = summarize(table_of(
        labels, {0.0001, 0.0011, 0.0001, 0.0001, 0.0007, 0.0001, 1.0, 0.0001, 0.0001, 0.0001}));
    CHECK(row1.prediction == 6);
    CHECK(row1.confidence == doctest::Approx(0.9989));
    CHECK(row1.credibility == doctest::Approx(1.0));

    ConfidenceCredibility row2 = summarize(table_of(
        labels,
        {0.0032, 0.0038, 0.0107, 0.0067, 0.0143, 0.0067, 0.0038, 0.0033, 0.0073, 0.0078}));
    CHECK(row2.prediction == 4);
    CHECK(row2.confidence == doctest::Approx(0.9893));
    CHECK(row2.credibility == doctest::Approx(0.0143));

    ConfidenceCredibility row3 = summarize(table_of(
        labels, {0.0001, 0.0027, 0.0003, 0.0004, 0.0018, 0.0001, 0.0004, 0.0001, 0.0012, 1.0}));
    CHECK(row3.prediction == 9);
    CHECK(row3.confidence == doctest::Approx(0.9973));
    CHECK(row3.credibility == doctest::Approx(1.0));
}

TEST_CASE("summarize ties break to the lowest alphabet index") {
    ConfidenceCredibility cc = summarize(table_of({"A", "B", "C"}, {0.4, 0.4, 0.4}));
    CHECK(cc.prediction == 0);
    CHECK(cc.confidence == doctest::Approx(0.6));
    CHECK(cc.credibility == doctest::Approx(0.4));
}

TEST_CASE("summarize needs at least two labels") {
    PValueTable t = table_of({"A"}, {1.0});
    CHECK_THROWS_AS(summarize(t), UsageError);
}

TEST_CASE("prediction sets are nested in epsilon") {
    RngStream g(22);
    for (int rep = 0; rep < 50; ++rep) {
        std::size_t c = 2 + g.next_u64() % 8;
        std::vector<double> p(c);
        for (auto& v : p) v = g.next_uniform();
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < c; ++i) labels.push_back("L" + std::to_string(i));
        PValueTable t = table_of(labels, p);

        double e1 = 0.05 + 0.4 * g.next_uniform();
        double e2 = e1 + (0.99 - e1) * g.next_uniform();
        auto big = prediction_set(t, Epsilon(e1)).labels();
        auto small = prediction_set(t, Epsilon(e2)).labels();
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
}

TEST_CASE("summarize is consistent with the prediction-set boundaries") {
    RngStream g(23);
    for (int rep = 0; rep < 50; ++rep) {
        std::size_t c = 2 + g.next_u64() % 6;
        std::vector<double> p(c);
        for (auto& v : p) v = 0.01 + 0.98 * g.next_uniform();
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < c; ++i) labels.push_back("L" + std::to_string(i));
        PValueTable t = table_of(labels, p);
        ConfidenceCredibility cc = summarize(t);

        // |Gamma| <= 1 at and beyond the second-largest p (= 1 - confidence,
        // taken from the table directly to avoid the 1-x round trip)
        std::vector<double> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        double second = sorted[sorted.size() - 2];
        for (double shift : {0.0, 0.01, 0.1}) {
            double e = second + shift;
            if (e <= 0.0 || e >= 1.0) continue;
            CHECK(prediction_set(t, Epsilon(e)).label_count() <= 1);
        }
        // empty exactly from credibility onward
        for (double shift : {0.0, 0.01, 0.1}) {
            double e = cc.credibility + shift;
            if (e <= 0.0 || e >= 1.0) continue;
            CHECK(prediction_set(t, Epsilon(e)).empty());
        }
        double below = cc.credibility - 0.005;
        if (below > 0.0) CHECK(!prediction_set(t, Epsilon(below)).empty());
    }
}

TEST_CASE("epsilon rejects the closed endpoints") {
    CHECK_THROWS_AS(Epsilon(0.0), UsageError);
    CHECK_THROWS_AS(Epsilon(1.0), UsageError);
    CHECK_THROWS_AS(Epsilon(-0.2), UsageError);
    CHECK(Epsilon(0.5).value() == 0.5);
}

TEST_CASE("smoothed tables replay bitwise under one seed") {
    Dataset train(1, LabelSpace::alphabet({"A", "B"}));
    train.add({0.0}, Label::of_class(0));
    train.add({2.0}, Label::of_class(1));

    SmoothingTape tape(99);
    RngStream s1 = tape.substream(1);
    RngStream s2 = tape.substream(1);
    PValueTable a = classify_p_table(train, {1.0}, make_knn_measure(KnnConfig{}), true, s1);
    PValueTable b = classify_p_table(train, {1.0}, make_knn_measure(KnnConfig{}), true, s2);
    CHECK(a.p == b.p);
}
