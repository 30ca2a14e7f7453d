#include <doctest.h>

#include <random>

#include "steff2d/discrete.hpp"

using namespace steff2d;
using namespace steff2d::discrete;

namespace {

DoubleSequence random_seq(std::size_t p, std::size_t q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    DoubleSequence s(p, q);
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j) s(i, j) = coef(rng);
    return s;
}

} // namespace

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(DoubleSequence::from_rows({}), InvalidArgument);
    CHECK_THROWS_AS(DoubleSequence::from_rows({{1, 2}, {3}}), InvalidArgument);
    const auto a = DoubleSequence::from_rows({{1, 2}, {3, 4}});
    CHECK(a(2, 1) == 3);
    CHECK_THROWS_AS(a(0, 1), InvalidArgument);
    CHECK_THROWS_AS(a(3, 1), InvalidArgument);
    CHECK_THROWS_AS(hardy_residual(a, DoubleSequence(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(steffensen_check(a, DoubleSequence(3, 2)), InvalidArgument);
}

TEST_CASE("delta table corner convention") {
    const auto a = DoubleSequence::from_rows({{1, 2}, {2, 4}});
    const auto d = delta_table(a);
    CHECK(d(1, 1) == 1 - 2 - 2 + 4);
    CHECK(d(1, 2) == 2 - 4);
    CHECK(d(2, 1) == 2 - 4);
    CHECK(d(2, 2) == 4);
}

TEST_CASE("hardy identity examples") {
    std::mt19937_64 rng(42);
    const auto a = random_seq(5, 7, rng), u = random_seq(5, 7, rng);
    CHECK(hardy_residual(a, u).abs_residual <= 1e-12);
    // all-ones a: every Delta but the corner vanishes, so RHS = S(p,q)
    const auto v = random_seq(3, 4, rng);
    const auto res = hardy_residual(DoubleSequence(3, 4, 1.0), v);
    CHECK(res.pass);
    CHECK(res.rhs == doctest::Approx(partial_sums(v)(3, 4)).epsilon(1e-14));
}

TEST_CASE("property: hardy identity over random shapes") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t p = dim(rng), q = dim(rng);
        const auto res = hardy_residual(random_seq(p, q, rng), random_seq(p, q, rng));
        REQUIRE(res.rel_residual <= 1e-12);
    }
}

TEST_CASE("property: partial sums and differences are inverse") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const auto u = random_seq(1 + t % 8, 1 + (t / 8) % 8, rng);
        const auto back = difference(partial_sums(u));
        const auto again = integrate_delta(delta_table(u));
        for (std::size_t i = 1; i <= u.rows(); ++i)
            for (std::size_t j = 1; j <= u.cols(); ++j) {
                CHECK(back(i, j) == doctest::Approx(u(i, j)).epsilon(1e-12));
                CHECK(again(i, j) == doctest::Approx(u(i, j)).epsilon(1e-12));
            }
    }
}

TEST_CASE("steffensen examples") {
    const auto fixture = steffensen_check(DoubleSequence::from_rows({{0.25, 0.125}, {0.125, 0.0625}}),
                                          DoubleSequence::from_rows({{1, -1}, {-1, 1}}));
    CHECK(fixture.hypotheses_hold());
    CHECK(fixture.sum == 1.0 / 16.0);
    CHECK(fixture.conclusion_holds);

    const auto ones = steffensen_check(DoubleSequence(3, 3, 1.0),
                                       DoubleSequence::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
    CHECK(ones.hypotheses_hold());
    CHECK(ones.sum == 1.0);

    const auto bad = steffensen_check(DoubleSequence::from_rows({{1, 2}, {2, 4}}), DoubleSequence(2, 2, 1.0));
    CHECK_FALSE(bad.nonneg_delta);
    REQUIRE(bad.first_negative_delta.has_value());
    CHECK(*bad.first_negative_delta == Index{1, 2});

    const auto neg_u = steffensen_check(DoubleSequence(2, 2, 1.0), DoubleSequence::from_rows({{-1, 0}, {0, 0}}));
    CHECK_FALSE(neg_u.nonneg_partial_sums);
    CHECK_FALSE(neg_u.conclusion_holds);
}

TEST_CASE("property: constructive pairs satisfy the inequality") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int t = 0; t < 1000; ++t) {
        const auto [a, u] = random_steffensen_pair(dim(rng), dim(rng), rng);
        const auto rep = steffensen_check(a, u);
        REQUIRE(rep.hypotheses_hold());
        REQUIRE(rep.sum >= -1e-12);
        REQUIRE(rep.conclusion_holds);
    }
}
