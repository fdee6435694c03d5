#include "doctest.h"

#include <cmath>
#include <initializer_list>

#include "conformal/rng.hpp"

using namespace conformal;

TEST_CASE("streams replay exactly under the same seed") {
    RngStream a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        auto va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("substream derivation is order-independent") {
    SmoothingTape tape(7);
    double first = tape.substream(5).next_uniform();
    (void)tape.substream(9).next_uniform();
    CHECK(tape.substream(5).next_uniform() == first);
}

TEST_CASE("uniforms stay in range") {
    RngStream g(1);
    for (int i = 0; i < 10000; ++i) {
        double u = g.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = g.next_open01();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("normal quantile matches reference values") {
    // Reference values of the standard normal quantile function.
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-9));
    CHECK(normal_quantile(0.99) == doctest::Approx(2.3263478740408408).epsilon(1e-9));
    CHECK(normal_quantile(0.999) == doctest::Approx(3.090232306167813).epsilon(1e-9));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-9));
}

TEST_CASE("normal quantile inverts the CDF to high accuracy") {
    for (int i = 1; i < 200; ++i) {
        double u = i / 200.0;
        CHECK(std::fabs(normal_cdf(normal_quantile(u)) - u) < 1e-12);
    }
    // deep tails
    for (double u : {1e-10, 1e-6, 1.0 - 1e-6}) {
        CHECK(std::fabs(normal_cdf(normal_quantile(u)) - u) < 1e-8 * std::max(u, 1e-3));
    }
}

TEST_CASE("normal sampling moments") {
    RngStream g(2024);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = g.next_normal();
        sum += z;
        sq += z * z;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(var - 1.0) < 0.03);
}
