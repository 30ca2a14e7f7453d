#include <doctest.h>

#include <random>

#include "steff2d/monotone.hpp"

using namespace steff2d;
using namespace steff2d::monotone;

TEST_CASE("f-measure of simple functions") {
    CHECK(f_measure(BivariateFn::parse("x*y"), {0, 2, 0, 3}) == 6);
    CHECK(f_measure(BivariateFn::parse("x+y"), {0, 2, 0, 3}) == 0);
    CHECK(f_measure(BivariateFn::parse("x^2+y^2"), {-1, 4, 2, 5}) == doctest::Approx(0.0));
    CHECK(mixed_partial_fd(BivariateFn::parse("x^2*y^2"), 1, 1, 1e-4) == doctest::Approx(4.0).epsilon(1e-3));
    CHECK_THROWS_AS(mixed_partial_fd(BivariateFn::parse("x"), 0, 0, 0), InvalidArgument);
}

TEST_CASE("property: f-measure is additive over splits") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    const auto f = BivariateFn::parse("sin(x*y)+exp(x-y)");
    for (int t = 0; t < 200; ++t) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        const double m = a + (b - a) * 0.37, n = c + (d - c) * 0.61;
        const double whole = f_measure(f, {a, b, c, d});
        const double split = f_measure(f, {a, m, c, n}) + f_measure(f, {m, b, c, n}) +
                             f_measure(f, {a, m, n, d}) + f_measure(f, {m, b, n, d});
        CHECK(whole == doctest::Approx(split).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: nested rectangles of a 2d-monotone function") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto f = catalog("C");
    for (int t = 0; t < 200; ++t) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        const Rect inner{a + (b - a) / 4, b - (b - a) / 4, c + (d - c) / 4, d - (d - c) / 4};
        CHECK(f_measure(f, inner) <= f_measure(f, {a, b, c, d}) + 1e-15);
        CHECK(f_measure(f, inner) >= -1e-15);
    }
}

TEST_CASE("certify verdicts on the catalog") {
    const auto F = expr::parse("x^2");
    const double two[] = {2.0}, half[] = {0.5};
    CHECK(certify(catalog("Pi"), {-1, 1, -1, 1}, 16).verdict == Verdict::Monotone2d);
    CHECK(certify(catalog("E"), {-1, 1, -1, 1}, 16).verdict == Verdict::Modular);
    CHECK(certify(catalog("C"), {0, 1, 0, 1}, 16).verdict == Verdict::Monotone2d);
    CHECK(certify(catalog("log_pow", two), {0.5, 2, 0.5, 2}, 16).verdict == Verdict::Alternating2d);
    CHECK(certify(catalog("neg_convex_diff", {}, F), {-1, 1, -1, 1}, 16).verdict == Verdict::Monotone2d);
    CHECK(certify(catalog("convex_sum", half, F), {0, 1, 0, 1}, 16).verdict == Verdict::Monotone2d);
    CHECK(certify(catalog("midpoint_gap", {}, F), {-1, 1, -1, 1}, 16).verdict == Verdict::Alternating2d);
    CHECK(certify(BivariateFn::parse("sin(2*x+3*y)"), {0, 2, 0, 2}, 16).verdict == Verdict::Indefinite);
}

TEST_CASE("certify reports witnesses, edges and sign of f") {
    const auto rep = certify(catalog("exp_decay"), {0, 1, 0, 1}, 8);
    CHECK(rep.monotone_decreasing());
    CHECK_FALSE(rep.monotone_increasing());
    CHECK(rep.edges.top_decreasing);
    CHECK(rep.edges.right_decreasing);
    CHECK(rep.nonnegative);
    CHECK(rep.min_cell_measure > 0);
    CHECK(rep.lattice.a > 0.0);  // default margin shrinks the lattice

    const auto neg = certify(BivariateFn::parse("-x*y"), {0, 1, 0, 1}, 8, {1e-9, 0.0});
    CHECK(neg.verdict == Verdict::Alternating2d);
    CHECK(neg.max_witness.a >= 0.0);
    CHECK_FALSE(neg.nonnegative);
    CHECK(neg.lattice.a == 0.0);

    CHECK_THROWS_AS(certify(catalog("Pi"), {0, 1, 0, 1}, 1), InvalidArgument);
    CHECK_THROWS_AS(certify(BivariateFn::parse("log(x)"), {-1, 1, 0, 1}, 4, {1e-9, 0.0}), DomainError);
}

TEST_CASE("catalog validation") {
    CHECK_THROWS_AS(catalog("nope"), InvalidArgument);
    CHECK_THROWS_AS(catalog("log_pow"), InvalidArgument);
    CHECK_THROWS_AS(catalog("neg_convex_diff"), InvalidArgument);
    CHECK_THROWS_AS(catalog("neg_convex_diff", {}, expr::parse("x*y")), InvalidArgument);
    const double three[] = {3.0};
    CHECK(catalog("log_pow", three)(1, 1) == doctest::Approx(std::log(2.0)));
    CHECK(catalog("midpoint_gap", {}, expr::parse("exp(t)"))(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("mixed partial consistency") {
    const auto mono = mixed_partial_consistency(catalog("C"), {0, 1, 0, 1}, 32);
    CHECK(mono.consistent);
    CHECK(mono.mixed_partial_min > 0);
    const auto modular = mixed_partial_consistency(BivariateFn::parse("x-y"), {-1, 1, -1, 1}, 32);
    CHECK(modular.report.verdict == Verdict::Modular);
    CHECK(modular.consistent);
    const auto kink = mixed_partial_consistency(BivariateFn::parse("abs(x-y)"), {-1, 1, -1, 1}, 8);
    CHECK_FALSE(kink.derivative_exact);
}

TEST_CASE("absolutely continuous representation") {
    quad::QuadratureSpec spec;
    spec.tolerance = 1e-11;
    const AcRepresentation g(1.0, {0, 0}, UnivariateFn::parse("2*t"), UnivariateFn::parse("1"),
                             BivariateFn::parse("x+y"), spec);
    // 1 + x^2 + y + (x^2 y + x y^2)/2
    for (double x : {0.0, 0.3, 1.0})
        for (double y : {0.0, 0.5, 0.9})
            CHECK(g(x, y) == doctest::Approx(1 + x * x + y + (x * x * y + x * y * y) / 2).epsilon(1e-10));
    const auto fn = g.as_function();
    CHECK(fn(0.5, 0.5) == doctest::Approx(g(0.5, 0.5)));
    // rectangle measure of an AC function is the density integral
    CHECK(f_measure(fn, {0.2, 0.7, 0.1, 0.4}) == doctest::Approx(0.5 * 0.3 * (0.45 + 0.25)).epsilon(1e-10));
}
