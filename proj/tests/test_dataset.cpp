#include "doctest.h"

#include <cmath>
#include <limits>

#include "conformal/dataset.hpp"

using namespace conformal;

namespace {

LabelSpace digits() {
    std::vector<std::string> symbols;
    for (int d = 0; d < 10; ++d) symbols.push_back(std::to_string(d));
    return LabelSpace::alphabet(symbols);
}

}  // namespace

TEST_CASE("complete appends the candidate as the last example") {
    Dataset train(1, LabelSpace::alphabet({"A", "B"}));

    SUBCASE("empty training base case") {
        Dataset seq = complete(train, {0.5}, Label::of_class(1));
        CHECK(seq.size() == 1);
        CHECK(seq[0].label.class_id() == 1);
        CHECK(seq[0].object[0] == 0.5);
    }

    SUBCASE("append semantics and order preservation") {
        train.add({0.0}, Label::of_class(0));
        train.add({1.0}, Label::of_class(1));
        Dataset seq = complete(train, {3.0}, Label::of_class(0));
        CHECK(seq.size() == 3);
        CHECK(seq[0].object[0] == 0.0);
        CHECK(seq[1].object[0] == 1.0);
        CHECK(seq[2].object[0] == 3.0);
        CHECK(seq[2].label.class_id() == 0);
        CHECK(train.size() == 2);  // input untouched
    }
}

TEST_CASE("completing with each alphabet label yields sequences differing only in the last label") {
    Dataset train(2, digits());
    train.add({1.0, 2.0}, Label::of_class(3));
    for (int d = 0; d < 10; ++d) {
        Dataset seq = complete(train, {0.0, 0.0}, Label::of_class(d));
        CHECK(seq.size() == 2);
        CHECK(seq[0].label.class_id() == 3);
        CHECK(seq[1].label.class_id() == d);
    }
}

TEST_CASE("complete validates dimension and label space") {
    Dataset train(2, LabelSpace::alphabet({"A", "B"}));
    CHECK_THROWS_AS(complete(train, {1.0}, Label::of_class(0)), DataError);
    CHECK_THROWS_AS(complete(train, {1.0, 2.0}, Label::of_class(7)), DataError);
    CHECK_THROWS_AS(complete(train, {1.0, 2.0}, Label::of_real(1.0)), DataError);
}

TEST_CASE("non-finite features and labels are rejected at ingestion") {
    Dataset data(1, LabelSpace::real_line());
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(data.add({inf}, Label::of_real(0.0)), DataError);
    CHECK_THROWS_AS(data.add({nan}, Label::of_real(0.0)), DataError);
    CHECK_THROWS_AS(Label::of_real(inf), DataError);
    data.add({1.0}, Label::of_real(2.0));
    CHECK(data.size() == 1);
}

TEST_CASE("alphabet invariants") {
    CHECK_THROWS_AS(LabelSpace::alphabet({"A"}), UsageError);
    CHECK_THROWS_AS(LabelSpace::alphabet({"A", "A"}), UsageError);
    LabelSpace space = LabelSpace::alphabet({"B", "A"});
    CHECK(space.index_of("A") == 1);
    CHECK(space.index_of("C") == -1);
    CHECK(space.n_classes() == 2);
}

TEST_CASE("duplicates are allowed (multiset semantics)") {
    Dataset data(1, LabelSpace::alphabet({"A", "B"}));
    data.add({1.0}, Label::of_class(0));
    data.add({1.0}, Label::of_class(0));
    CHECK(data.size() == 2);
}
