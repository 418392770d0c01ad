#include <cmath>
#include <stdexcept>

#include "detbench/fixture.hpp"
#include "detbench/productivity.hpp"
#include "doctest.h"

using namespace detbench;

namespace {

// Direct evaluation of the four-event decomposition in long double.
long double naive_rank(std::size_t r, std::size_t s, std::size_t n, long double b) {
    long double h = 0;
    for (std::size_t i = 1; i <= n; ++i) h += 1.0L / i;
    const long double p = 1.0L / (r * h);
    const long double none = std::pow(1 - p, (long double)s);
    const long double fav_only = std::pow(b * p + 1 - p, (long double)s) - none;
    const long double dis_only = std::pow((1 - b) * p + 1 - p, (long double)s) - none;
    return 1 - none - fav_only - dis_only;
}

long double naive_mean(std::size_t s, std::size_t n, long double b) {
    long double sum = 0;
    for (std::size_t r = 1; r <= n; ++r) sum += naive_rank(r, s, n, b);
    return sum / n;
}

}  // namespace

TEST_SUITE("productivity") {

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(2) == 1.5);
    CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    CHECK(harmonic(3, 2.0) == doctest::Approx(1.0 + 0.25 + 1.0 / 9.0));
    CHECK_THROWS_AS(harmonic(0), std::domain_error);
}

TEST_CASE("zipf probabilities sum to one") {
    ZipfModel z(500);
    double sum = 0;
    for (std::size_t r = 1; r <= 500; ++r) sum += z.probability(r);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z.probability(1) == doctest::Approx(2 * z.probability(2)));
}

TEST_CASE("rank expectation examples") {
    CHECK(expected_overlap_rank(1, 2, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(expected_overlap_rank(3, 500, 10, 1.0) == 0.0);
    CHECK(expected_overlap_rank(1, 0, 10, 0.7) == 0.0);
    CHECK_THROWS_AS(expected_overlap_rank(0, 5, 10, 0.7), std::domain_error);
    CHECK_THROWS_AS(expected_overlap_rank(11, 5, 10, 0.7), std::domain_error);
    CHECK_THROWS_AS(expected_overlap_rank(1, 5, 10, 0.4), std::domain_error);
    CHECK_THROWS_AS(expected_overlap_rank(1, 5, 10, 1.1), std::domain_error);
}

TEST_CASE("published rows are reachable within input rounding") {
    // The table's bias column is rounded to 3 decimals; some b in the
    // rounding interval must land on the published value.
    struct Row {
        std::size_t s, n;
        double b, published;
    };
    for (Row r : {Row{863, 316, 0.868, 0.148}, Row{3684, 407, 0.770, 0.494},
                  Row{4205, 539, 0.791, 0.417}}) {
        const double hi = expected_overlap(r.s, r.n, r.b - 0.0005);
        const double lo = expected_overlap(r.s, r.n, r.b + 0.0005);
        CHECK(lo <= r.published + 0.0005);
        CHECK(hi >= r.published - 0.0005);
    }
}

TEST_CASE("agrees with direct long double evaluation") {
    for (std::size_t n : {1u, 7u, 50u, 316u})
        for (std::size_t s : {0u, 1u, 5u, 200u, 2000u})
            for (double b : {0.5, 0.6, 0.85, 0.99, 1.0})
                CHECK(expected_overlap(s, n, b) ==
                      doctest::Approx(static_cast<double>(naive_mean(s, n, b))).epsilon(1e-10));
}

TEST_CASE("stable for large samples") {
    const double e = expected_overlap(200000, 50, 0.9);
    CHECK(std::isfinite(e));
    CHECK(e == doctest::Approx(1.0).epsilon(1e-9));
    auto pred = predict_overlap(863, 316, 0.868);
    REQUIRE(pred.per_rank.size() == 316);
    for (double v : pred.per_rank) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // higher-frequency ranks are likelier to show both determiners
    CHECK(pred.per_rank.front() > pred.per_rank.back());
}

TEST_CASE("monotone in S and b") {
    for (std::size_t n : {10u, 120u, 600u}) {
        double prev = -1;
        for (std::size_t s = 0; s <= 5000; s += 125) {
            const double e = expected_overlap(s, n, 0.8);
            CHECK(e >= prev - 1e-15);
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
            prev = e;
        }
        prev = 2;
        for (int k = 0; k <= 50; ++k) {
            const double e = expected_overlap(1500, n, 0.5 + k * 0.01);
            CHECK(e <= prev + 1e-15);
            prev = e;
        }
        CHECK(expected_overlap(1500, n, 1.0) == 0.0);
    }
}

TEST_CASE("every fixture row within table rounding") {
    for (const auto& row : builtin_fixture().rows)
        CHECK(std::abs(expected_overlap(row.tokens, row.types, row.bias) - row.predicted) <= 0.005);
}

}  // TEST_SUITE
