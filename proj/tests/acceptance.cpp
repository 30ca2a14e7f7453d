// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "steff2d/copula.hpp"
#include "steff2d/discrete.hpp"
#include "steff2d/ineq.hpp"
#include "steff2d/monotone.hpp"
#include "steff2d/quad.hpp"

using namespace steff2d;
namespace {

constexpr double kPi = std::numbers::pi;

// Oracle values (50-digit evaluation, frozen).
constexpr double kThm3Fixture = 0.249067150469735057842;       // ((1-e^{-2pi})/2)^2
constexpr double kEightPiSq = 78.9568352087148689507;          // 8 pi^2
constexpr double kRecipSum = 1.56071428571428571429;           // sum_{m,n=2..4} 1/(m+n)
constexpr double kExpDecayMeasure = 0.399576400893728048703;   // (1-e^{-1})^2

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            out_.pass = false;
            if (failures_++ < 4) out_.detail += (out_.detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
    Outcome done() {
        if (out_.pass) out_.detail = notes_;
        else if (failures_ > 4) out_.detail += "; +" + std::to_string(failures_ - 4) + " more";
        return out_;
    }

private:
    Outcome out_;
    std::string notes_;
    int failures_ = 0;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- criteria

Outcome ac1() {
    Check c;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t p = dim(rng), q = dim(rng);
        discrete::DoubleSequence a(p, q), u(p, q);
        for (std::size_t i = 1; i <= p; ++i)
            for (std::size_t j = 1; j <= q; ++j) {
                a(i, j) = coef(rng);
                u(i, j) = coef(rng);
            }
        const auto res = discrete::hardy_residual(a, u, 1e-12);
        worst = std::max(worst, res.rel_residual);
        c.expect(res.rel_residual <= 1e-12, "trial " + std::to_string(t) + " rel " + fmt(res.rel_residual));
    }
    c.note("max rel residual " + fmt(worst));
    return c.done();
}

Outcome ac2() {
    Check c;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> dim(1, 8);
    double min_sum = INFINITY;
    for (int t = 0; t < 1000; ++t) {
        const auto [a, u] = discrete::random_steffensen_pair(dim(rng), dim(rng), rng);
        const auto rep = discrete::steffensen_check(a, u, 1e-12);
        min_sum = std::min(min_sum, rep.sum);
        c.expect(rep.hypotheses_hold(), "trial " + std::to_string(t) + " generator broke hypotheses");
        c.expect(rep.sum >= -1e-12, "trial " + std::to_string(t) + " sum " + fmt(rep.sum));
    }
    const auto a = discrete::DoubleSequence::from_rows({{0.25, 0.125}, {0.125, 0.0625}});
    const auto u = discrete::DoubleSequence::from_rows({{1, -1}, {-1, 1}});
    const auto fixture = discrete::steffensen_check(a, u);
    c.expect(fixture.hypotheses_hold(), "fixture hypotheses");
    c.expect(fixture.sum == 1.0 / 16.0, "fixture sum " + fmt(fixture.sum));
    c.note("min sum " + fmt(min_sum) + ", fixture " + fmt(fixture.sum));
    return c.done();
}

Outcome ac3() {
    Check c;
    struct Case {
        const char* name;
        BivariateFn f;
        Rect r;
        monotone::Verdict expected;
    };
    const auto F = expr::parse("x^2");
    const double two[] = {2.0};
    const std::vector<Case> cases{
        {"Pi", monotone::catalog("Pi"), {-1, 1, -1, 1}, monotone::Verdict::Monotone2d},
        {"E", monotone::catalog("E"), {-1, 1, -1, 1}, monotone::Verdict::Modular},
        {"C", monotone::catalog("C"), {0, 1, 0, 1}, monotone::Verdict::Monotone2d},
        {"log", monotone::catalog("log_pow", two), {0.5, 2, 0.5, 2}, monotone::Verdict::Alternating2d},
        {"-(x-y)^2", monotone::catalog("neg_convex_diff", {}, F), {-1, 1, -1, 1},
         monotone::Verdict::Monotone2d},
        {"(x-y)^2/4", monotone::catalog("midpoint_gap", {}, F), {-1, 1, -1, 1},
         monotone::Verdict::Alternating2d},
        {"exp(-x-y)", monotone::catalog("exp_decay"), {0, 1, 0, 1}, monotone::Verdict::Monotone2d},
        {"x-y", BivariateFn::parse("x-y"), {-1, 1, -1, 1}, monotone::Verdict::Modular},
    };
    for (const auto& k : cases) {
        const auto rep = monotone::mixed_partial_consistency(k.f, k.r, 32, {});
        c.expect(rep.consistent, std::string(k.name) + " inconsistent");
        c.expect(rep.report.verdict == k.expected,
                 std::string(k.name) + " verdict " + std::string(monotone::to_string(rep.report.verdict)));
    }
    c.note(std::to_string(cases.size()) + " functions consistent");
    return c.done();
}

Outcome ac4() {
    Check c;
    quad::QuadratureSpec spec;
    spec.tolerance = 1e-8;
    struct Pair {
        const char* f;
        const char* w;
        Rect r;
    };
    const std::vector<Pair> family{
        {"exp(-x-y)", "sin(x)*sin(y)", {0, kPi, 0, kPi}},
        {"x*y", "1+x*y", {0, 1, 0, 1}},
        {"log(x^2+y^2)", "cos(x+y)", {0.5, 2, 0.5, 2}},
        {"(x-y)^2/4", "exp(x)*y", {-1, 1, -1, 1}},
        {"sin(2*x+3*y)", "x+y^2", {0, 2, 0, 2}},
        {"x^3*y-x*y^3", "exp(-x*y)", {-1, 1, -1, 1}},
    };
    double worst = 0.0;
    for (const auto& p : family) {
        const auto f = BivariateFn::parse(p.f);
        const auto w = BivariateFn::parse(p.w);
        for (auto v : {ineq::YoungVariant::Y1, ineq::YoungVariant::Y2}) {
            const auto rep = ineq::young_residual(v, f, w, p.r, spec, 1e-6);
            worst = std::max(worst, rep.residual.abs_residual);
            c.expect(rep.residual.abs_residual <= 1e-6,
                     std::string(v == ineq::YoungVariant::Y1 ? "Y1 " : "Y2 ") + p.f + " residual " +
                         fmt(rep.residual.abs_residual));
        }
    }
    const auto fixture = ineq::young_residual(ineq::YoungVariant::Y1, BivariateFn::parse("x"),
                                              BivariateFn::parse("1"), {0, 1, 0, 1}, spec, 1e-10);
    c.expect(std::fabs(fixture.residual.lhs - 0.5) <= 1e-10, "fixture lhs " + fmt(fixture.residual.lhs));
    c.expect(std::fabs(fixture.residual.rhs - 0.5) <= 1e-10, "fixture rhs " + fmt(fixture.residual.rhs));
    c.note("max residual " + fmt(worst));
    return c.done();
}

Outcome ac5() {
    Check c;
    quad::QuadratureSpec spec;
    spec.tolerance = 1e-10;
    const auto rep = ineq::steffensen_integral(ineq::Theorem::Thm3, BivariateFn::parse("exp(-x-y)"),
                                               BivariateFn::parse("sin(x)*sin(y)"),
                                               {0, 2 * kPi, 0, 2 * kPi}, spec);
    c.expect(std::fabs(rep.lhs - kThm3Fixture) <= 1e-6, "lhs " + fmt(rep.lhs));
    c.expect(std::fabs(rep.bound) <= 1e-6, "bound " + fmt(rep.bound));
    c.expect(rep.inequality_holds && rep.lhs >= rep.bound, "inequality");
    c.expect(rep.hypotheses_hold(), "hypotheses");
    c.note("lhs " + fmt(rep.lhs) + " vs bound " + fmt(rep.bound));
    return c.done();
}

Outcome ac6() {
    Check c;
    int checks = 0;
    double min_value = INFINITY;
    for (const char* f : {"x^2", "x^3", "exp(x/10)"})
        for (int m = 1; m <= 4; ++m)
            for (int n = 1; n <= 4; ++n) {
                const auto rep = ineq::fourier_check(ineq::FourierKernel::SinSin2d, expr::parse(f), m, n);
                ++checks;
                min_value = std::min(min_value, rep.value);
                c.expect(rep.value >= -1e-8 && rep.sign_holds,
                         std::string(f) + " m=" + std::to_string(m) + " n=" + std::to_string(n) + " value " +
                             fmt(rep.value));
            }
    const auto base = ineq::fourier_check(ineq::FourierKernel::SinSin2d, expr::parse("x^2"), 1, 1);
    c.expect(std::fabs(base.value - kEightPiSq) <= 1e-6, "u^2 value " + fmt(base.value));
    c.note(std::to_string(checks) + " checks, min " + fmt(min_value));
    return c.done();
}

Outcome ac7() {
    Check c;
    const auto f = expr::parse("x^2");
    for (int n = 1; n <= 5; ++n) {
        const auto cs = ineq::fourier_check(ineq::FourierKernel::Cos1d, f, 1, n);
        const auto sn = ineq::fourier_check(ineq::FourierKernel::Sin1d, f, 1, n);
        c.expect(std::fabs(cs.value - 4 * kPi / (n * n)) <= 1e-8, "cos n=" + std::to_string(n));
        c.expect(std::fabs(sn.value + 4 * kPi * kPi / n) <= 1e-8, "sin n=" + std::to_string(n));
        c.expect(sn.value < 0.0, "sin n=" + std::to_string(n) + " not negative");
    }
    return c.done();
}

Outcome ac8() {
    Check c;
    const double lo = 1e-6, hi = 3 * kPi / 4;
    const auto rep = ineq::steffensen_integral(ineq::Theorem::Remark3, BivariateFn::parse("log(x^2+y^2)"),
                                               BivariateFn::parse("-sin(x+y)"), {lo, hi, lo, hi});
    c.expect(rep.lhs <= rep.bound + 1e-6, "lhs " + fmt(rep.lhs) + " > bound " + fmt(rep.bound));
    c.expect(rep.inequality_holds, "inequality flag");
    c.expect(rep.hypotheses_hold(), "hypotheses");
    c.note("lhs " + fmt(rep.lhs) + " <= " + fmt(rep.bound));
    return c.done();
}

Outcome ac9() {
    Check c;
    quad::QuadratureSpec spec;
    spec.tolerance = 1e-10;
    const auto xy = ineq::sum_vs_integral(BivariateFn::parse("x*y"), {0, 2, 0, 2}, spec, 1e-10);
    c.expect(xy.residual.lhs == 9.0, "xy lhs " + fmt(xy.residual.lhs));
    c.expect(std::fabs(xy.residual.rhs - 9.0) <= 1e-10, "xy rhs " + fmt(xy.residual.rhs));
    const auto rec = ineq::sum_vs_integral(BivariateFn::parse("1/(x+y)"), {1, 4, 1, 4});
    c.expect(std::fabs(rec.residual.lhs - kRecipSum) <= 1e-12, "1/(x+y) lhs");
    c.expect(rec.residual.abs_residual <= 1e-6, "1/(x+y) residual " + fmt(rec.residual.abs_residual));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> k(0.1, 1.0);
    std::uniform_int_distribution<int> corner(0, 2), extent(1, 2);
    const char* templates[] = {"exp(%g*x-%g*y)", "1/(1+%g*x+%g*y)", "(1+%g*x)*(2+%g*y)",
                               "sqrt(1+%g*x*y+%g*y)", "log(2+%g*x+%g*y^2)"};
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        char src[96];
        std::snprintf(src, sizeof src, templates[t % 5], k(rng), k(rng));
        const double a = corner(rng), cc = corner(rng);
        const Rect r{a, a + extent(rng), cc, cc + extent(rng)};
        const auto rep = ineq::sum_vs_integral(BivariateFn::parse(src), r);
        worst = std::max(worst, rep.residual.abs_residual);
        c.expect(rep.residual.pass, std::string(src) + " residual " + fmt(rep.residual.abs_residual));
    }
    c.note("random max residual " + fmt(worst));
    return c.done();
}

Outcome ac10() {
    Check c;
    const auto indep = copula::archimedean(copula::Generator::parse("-log(t)"));
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            const double x = i / 100.0, y = j / 100.0;
            worst = std::max(worst, std::fabs(indep(x, y) - x * y));
        }
    c.expect(worst <= 1e-12, "-log(t) vs Pi max error " + fmt(worst));
    const auto clayton = copula::archimedean(copula::Generator::parse("1/t-1"));
    c.expect(std::fabs(clayton(0.5, 0.5) - 1.0 / 3.0) <= 1e-12, "clayton(0.5,0.5)");
    for (const auto& [name, fn] : {std::pair{"product", BivariateFn::parse("x*y")},
                                   std::pair{"min", BivariateFn::parse("min(x,y)")},
                                   std::pair{"clayton", clayton}})
        c.expect(copula::validate_copula(fn, 32, 1e-9).pass, std::string(name) + " rejected");
    const auto bad = copula::validate_copula(BivariateFn::parse("x+y"), 32, 1e-9);
    c.expect(!bad.pass && !bad.boundary_witness.empty(), "x+y accepted");
    c.note("x+y witness: " + bad.boundary_witness);
    return c.done();
}

Outcome ac11() {
    Check c;
    struct Integrator {
        const char* name;
        BivariateFn f;
        Rect r;
    };
    const auto F = expr::parse("x^2");
    std::vector<Integrator> fs{
        {"Pi", monotone::catalog("Pi"), {-1, 1, -1, 1}},
        {"C", monotone::catalog("C"), {0, 1, 0, 1}},
        {"exp_decay", monotone::catalog("exp_decay"), {0, 1, 0, 1}},
        {"neg_convex_diff", monotone::catalog("neg_convex_diff", {}, F), {-1, 1, -1, 1}},
    };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> k(-3.0, 3.0);
    const char* templates[] = {"sin(%g*x+%g*y)", "cos(%g*x)*(%g-y)", "exp(%g*x*y)*%g", "%g*x^2-%g*y",
                               "abs(x-%g)*%g"};
    quad::StieltjesOptions opts;
    opts.tolerance = 1e-6;
    opts.richardson = true;
    int checks = 0;
    for (const auto& integ : fs) {
        const auto cert = monotone::certify(integ.f, integ.r, 32);
        c.expect(cert.verdict == monotone::Verdict::Monotone2d, std::string(integ.name) + " not monotone2d");
        for (int t = 0; t < 20; ++t) {
            char src[96];
            std::snprintf(src, sizeof src, templates[t % 5], k(rng), k(rng));
            const auto res = quad::stieltjes2d(BivariateFn::parse(src), integ.f, integ.r, 16, opts);
            ++checks;
            c.expect(res.integrator_monotone && res.bound_holds,
                     std::string(integ.name) + " h=" + src + " |" + fmt(res.value) + "| > " + fmt(res.bound));
        }
    }
    opts.tolerance = 1e-9;
    const auto fixture = quad::stieltjes_vs_riemann(BivariateFn::parse("1"), BivariateFn::parse("exp(-x-y)"),
                                                    {0, 1, 0, 1}, {}, 1e-6, opts);
    c.expect(fixture.abs_residual <= 1e-6, "stieltjes vs riemann residual " + fmt(fixture.abs_residual));
    c.expect(std::fabs(fixture.lhs - kExpDecayMeasure) <= 1e-6, "fixture value " + fmt(fixture.lhs));
    c.note(std::to_string(checks) + " bounds, fixture residual " + fmt(fixture.abs_residual));
    return c.done();
}

Outcome ac12() {
    Check c;
    for (int n : {1, 4, 16}) {
        const double mass = quad::Mollifier(n).mass();
        c.expect(std::fabs(mass - 1.0) <= 1e-6, "n=" + std::to_string(n) + " mass " + fmt(mass));
    }
    const auto f = BivariateFn::parse("exp(-x-y)");
    const Rect r{0, 1, 0, 1};
    const Rect inner = r.shrink(0.3);
    auto sup_error = [&](int n) {
        const auto g = quad::mollify(f, r, n);
        double sup = 0.0;
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; j <= 8; ++j) {
                const double x = inner.a + inner.width() * i / 8, y = inner.c + inner.height() * j / 8;
                sup = std::max(sup, std::fabs(g(x, y) - f(x, y)));
            }
        return sup;
    };
    const double e4 = sup_error(4), e16 = sup_error(16);
    c.expect(e16 < e4, "sup error n=16 " + fmt(e16) + " not below n=4 " + fmt(e4));
    c.note("sup error " + fmt(e4) + " -> " + fmt(e16));
    return c.done();
}

Outcome ac13() {
    Check c;
    const monotone::AcRepresentation g(0.0, Point{0, 0}, UnivariateFn::parse("1"), UnivariateFn::parse("1"),
                                       BivariateFn::parse("0"));
    const auto rep = ineq::byparts_residual(BivariateFn::parse("x"), g, {0, 1, 0, 1});
    c.expect(std::fabs(rep.residual.abs_residual - 0.5) <= 1e-9, "residual " + fmt(rep.residual.abs_residual));
    c.expect(!rep.g_vanishes_lower_left, "edge-vanishing flag not raised");
    c.expect(!rep.residual.pass, "identity reported as holding");
    c.note("lhs " + fmt(rep.residual.lhs) + " rhs " + fmt(rep.residual.rhs));
    return c.done();
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 Hardy partial summation identity", ac1},
        {"AC2 discrete Abel-Steffensen inequality", ac2},
        {"AC3 lattice verdict vs mixed partial sign", ac3},
        {"AC4 Young identities", ac4},
        {"AC5 decreasing-class integral inequality fixture", ac5},
        {"AC6 sin-kernel double integral signs", ac6},
        {"AC7 one-dimensional cos/sin coefficients of x^2", ac7},
        {"AC8 alternating-class log/sin illustration", ac8},
        {"AC9 double sum vs double integral", ac9},
        {"AC10 copulas", ac10},
        {"AC11 Stieltjes bound and Riemann reduction", ac11},
        {"AC12 mollifier mass and convergence", ac12},
        {"AC13 by-parts counterexample guard", ac13},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", name, secs,
                    o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
