#include <doctest.h>

#include <cmath>
#include <numbers>

#include "steff2d/ineq.hpp"

using namespace steff2d;
using namespace steff2d::ineq;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRemarkLhs = 0.682804088193767683535;  // int int log(x^2+y^2) sin(x+y) over (0,3pi/4]^2
constexpr double kSinSquare = 2.41421356237309504880;   // int int sin(s+t) over [0,3pi/4]^2
}

TEST_CASE("Young identities: examples") {
    const auto k = young_residual(YoungVariant::Y1, BivariateFn::parse("3"), BivariateFn::parse("cos(x*y)"),
                                  {0, 1, 0, 2});
    CHECK(k.residual.abs_residual <= 1e-12);
    CHECK(k.terms.edge_x == 0.0);

    const auto lin = young_residual(YoungVariant::Y1, BivariateFn::parse("x"), BivariateFn::parse("1"),
                                    {0, 1, 0, 1});
    CHECK(lin.terms.corner == doctest::Approx(1.0));
    CHECK(lin.terms.edge_x == doctest::Approx(0.5));
    CHECK(std::fabs(lin.residual.lhs - 0.5) <= 1e-10);
    CHECK(std::fabs(lin.residual.rhs - 0.5) <= 1e-10);

    const auto y2 = young_residual(YoungVariant::Y2, BivariateFn::parse("exp(-x-y)"),
                                   BivariateFn::parse("sin(x)*sin(y)"), {0, kPi, 0, kPi});
    CHECK(y2.residual.abs_residual <= 1e-6);
}

TEST_CASE("decreasing-class inequality") {
    const auto rep = steffensen_integral(Theorem::Thm3, BivariateFn::parse("exp(-x-y)"),
                                         BivariateFn::parse("sin(x)*sin(y)"), {0, 2 * kPi, 0, 2 * kPi});
    CHECK(rep.hypotheses_hold());
    CHECK(rep.inequality_holds);
    CHECK(rep.f_nonnegative);
    CHECK(rep.lhs == doctest::Approx(std::pow((1 - std::exp(-2 * kPi)) / 2, 2)).epsilon(1e-9));

    // w with a negative primitive: hypothesis diagnostics flag it, evaluation still runs
    const auto bad = steffensen_integral(Theorem::Thm3, BivariateFn::parse("exp(-x-y)"),
                                         BivariateFn::parse("-1"), {0, 1, 0, 1});
    CHECK_FALSE(bad.primitive_ok);
    CHECK_FALSE(bad.hypotheses_hold());
    CHECK(bad.lhs == doctest::Approx(-0.399576400893728));
}

TEST_CASE("increasing-class inequality") {
    const auto rep = steffensen_integral(Theorem::Thm4, BivariateFn::parse("x*y"), BivariateFn::parse("1"),
                                         {0, 1, 0, 1});
    CHECK(rep.hypotheses_hold());
    CHECK(rep.lhs == doctest::Approx(0.25));
    CHECK(rep.bound == doctest::Approx(0.0));
    CHECK(rep.inequality_holds);
    // wrong class is reported, not hidden
    const auto wrong = steffensen_integral(Theorem::Thm4, BivariateFn::parse("exp(-x-y)"),
                                           BivariateFn::parse("1"), {0, 1, 0, 1});
    CHECK_FALSE(wrong.edges_ok);
}

TEST_CASE("alternating-class illustration") {
    const double lo = 1e-6, hi = 3 * kPi / 4;
    const auto rep = steffensen_integral(Theorem::Remark3, BivariateFn::parse("log(x^2+y^2)"),
                                         BivariateFn::parse("-sin(x+y)"), {lo, hi, lo, hi});
    CHECK(rep.hypotheses_hold());
    CHECK_FALSE(rep.f_nonnegative);
    CHECK(rep.inequality_holds);
    CHECK(rep.lhs == doctest::Approx(kRemarkLhs).epsilon(1e-5));
    CHECK(rep.bound == doctest::Approx(std::log(9 * kPi * kPi / 8) * kSinSquare).epsilon(1e-5));
}

TEST_CASE("property: Y1 terms reproduce the decreasing-class gap") {
    struct Case {
        const char* f;
        const char* w;
        Rect r;
    };
    for (const Case& c : {Case{"exp(-x-y)", "sin(x)*sin(y)", {0, kPi, 0, kPi}},
                          Case{"1/(1+x+y)", "1+x*y", {0, 1, 0, 1}},
                          Case{"exp(-x*y-x-y)", "cos(x)+1", {0, 1, 0, 2}}}) {
        const auto f = BivariateFn::parse(c.f);
        const auto w = BivariateFn::parse(c.w);
        const auto y1 = young_residual(YoungVariant::Y1, f, w, c.r);
        const auto thm = steffensen_integral(Theorem::Thm3, f, w, c.r);
        REQUIRE(thm.hypotheses_hold());
        // lhs - bound = -edge_x - edge_y + interior, each correction nonnegative
        CHECK(-y1.terms.edge_x >= -1e-9);
        CHECK(-y1.terms.edge_y >= -1e-9);
        CHECK(y1.terms.interior >= -1e-9);
        const double gap = thm.lhs - thm.bound;
        CHECK(std::fabs(gap - (-y1.terms.edge_x - y1.terms.edge_y + y1.terms.interior)) <= 1e-5);
    }
}

TEST_CASE("Fourier kernels") {
    const auto base = fourier_check(FourierKernel::SinSin2d, expr::parse("x^2"), 1, 1);
    CHECK(base.value == doctest::Approx(8 * kPi * kPi).epsilon(1e-10));
    CHECK(base.expected_sign == ExpectedSign::Nonnegative);
    CHECK(base.hypotheses_hold);
    const auto sn = fourier_check(FourierKernel::Sin1d, expr::parse("x^2"), 1, 1);
    CHECK(sn.value == doctest::Approx(-4 * kPi * kPi));
    CHECK(sn.expected_sign == ExpectedSign::Unconstrained);
    CHECK(sn.sign_holds);
    const auto cs = fourier_check(FourierKernel::Cos1d, expr::parse("x^2"), 1, 2);
    CHECK(cs.value == doctest::Approx(kPi));
    const auto cc = fourier_check(FourierKernel::CosCos2d, expr::parse("x^2+x*y+y^2"), 1, 1);
    CHECK(cc.value >= -1e-8);
    CHECK_THROWS_AS(fourier_check(FourierKernel::SinSin2d, expr::parse("x*y"), 1, 1), InvalidArgument);
    CHECK_THROWS_AS(fourier_check(FourierKernel::Cos1d, expr::parse("x"), 1, 0), InvalidArgument);
}

TEST_CASE("property: sin kernel is shift invariant") {
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            const double a = fourier_check(FourierKernel::SinSin2d, expr::parse("x^3"), m, n).value;
            const double b = fourier_check(FourierKernel::SinSin2d, expr::parse("x^3+7"), m, n).value;
            CHECK(std::fabs(a - b) <= 1e-8);
        }
}

TEST_CASE("integration by parts") {
    quad::QuadratureSpec spec;
    const monotone::AcRepresentation xy(0.0, {0, 0}, UnivariateFn::parse("0"), UnivariateFn::parse("0"),
                                        BivariateFn::parse("1"), spec);
    const auto k = byparts_residual(BivariateFn::parse("5"), xy, {0, 1, 0, 1});
    CHECK(k.residual.pass);
    CHECK(k.residual.lhs == doctest::Approx(5.0));
    CHECK(k.g_vanishes_lower_left);
    const auto smooth = byparts_residual(BivariateFn::parse("exp(-x-y)"), xy, {0, 1, 0, 1});
    CHECK(smooth.residual.abs_residual <= 1e-6);

    const monotone::AcRepresentation sum(0.0, {0, 0}, UnivariateFn::parse("1"), UnivariateFn::parse("1"),
                                         BivariateFn::parse("0"), spec);
    const auto ce = byparts_residual(BivariateFn::parse("x"), sum, {0, 1, 0, 1});
    CHECK(std::fabs(ce.residual.abs_residual - 0.5) <= 1e-9);
    CHECK_FALSE(ce.g_vanishes_lower_left);
}

TEST_CASE("double sums versus integrals") {
    const auto xy = sum_vs_integral(BivariateFn::parse("x*y"), {0, 2, 0, 2});
    CHECK(xy.residual.lhs == 9.0);
    CHECK(xy.terms.integral == doctest::Approx(4.0));
    CHECK(xy.terms.x_term == doctest::Approx(2.0));
    CHECK(xy.terms.xy_term == doctest::Approx(1.0));
    const auto one = sum_vs_integral(BivariateFn::parse("1"), {0, 3, 0, 2});
    CHECK(one.residual.lhs == 6.0);
    CHECK(one.residual.rhs == doctest::Approx(6.0));
    CHECK_THROWS_AS(sum_vs_integral(BivariateFn::parse("x"), {0, 1.5, 0, 1}), InvalidArgument);
}
