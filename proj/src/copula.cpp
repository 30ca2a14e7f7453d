#include "steff2d/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "steff2d/monotone.hpp"

namespace steff2d::copula {

Generator::Generator(expr::Expr phi, int samples) : phi_(std::move(phi)) {
    if (samples < 3) throw InvalidArgument("generator sampling needs >= 3 points");
    phi_one_ = phi_(1.0);
    if (!(std::fabs(phi_one_) <= 1e-12))
        throw InvalidArgument("generator must satisfy phi(1) = 0, got " + std::to_string(phi_one_));

    const double z = phi_(0.0);
    if (std::isinf(z) && z > 0.0) {
        phi_zero_ = z;
    } else if (std::isfinite(z)) {
        phi_zero_ = z;
    } else {
        // NaN at 0: fall back to the value just above zero.
        const double near = phi_(std::numeric_limits<double>::min());
        phi_zero_ = std::isfinite(near) ? near : std::numeric_limits<double>::infinity();
    }

    std::vector<double> v(samples + 1);
    for (int k = 1; k <= samples; ++k) {
        v[k] = phi_(static_cast<double>(k) / samples);
        if (!std::isfinite(v[k]))
            throw InvalidArgument("generator is not finite at t = " + std::to_string(double(k) / samples));
    }
    for (int k = 1; k < samples; ++k)
        if (!(v[k + 1] < v[k]))
            throw InvalidArgument("generator is not strictly decreasing near t = " +
                                  std::to_string(double(k) / samples));
    min_second_diff_ = std::numeric_limits<double>::infinity();
    for (int k = 2; k < samples; ++k)
        min_second_diff_ = std::min(min_second_diff_, v[k - 1] - 2.0 * v[k] + v[k + 1]);
    if (min_second_diff_ < -1e-9)
        throw InvalidArgument("generator is not convex on the sample grid");
}

Generator Generator::parse(std::string_view src, int samples) {
    return Generator(expr::parse(src), samples);
}

double Generator::operator()(double t) const { return t <= 0.0 ? phi_zero_ : phi_(t); }

double Generator::inverse(double s) const {
    if (s >= phi_zero_) return 0.0;
    if (s <= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;  // phi(lo) > s >= phi(hi)
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double pm = phi_(mid);
        if (!std::isfinite(pm) && !(pm > 0.0))
            throw NonConvergence("generator inverse hit a non-finite value at t = " + std::to_string(mid));
        if (pm > s)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo > 1e-14) throw NonConvergence("generator inverse did not converge");
    return 0.5 * (lo + hi);
}

BivariateFn archimedean(const Generator& gen) {
    return BivariateFn(
        [gen](double x, double y) {
            const double s = gen(x) + gen(y);
            return gen.inverse(std::min(s, gen.at_zero()));
        },
        "archimedean[" + gen.phi().label() + "]");
}

CopulaReport validate_copula(const BivariateFn& C, int grid, double tol) {
    if (grid < 1) throw InvalidArgument("copula grid must be >= 1");
    CopulaReport rep;
    rep.grid = grid;
    rep.tolerance = tol;
    auto grid_pt = [grid](int k) { return k == grid ? 1.0 : static_cast<double>(k) / grid; };
    auto note = [&](double err, const char* condition, double t) {
        if (err > rep.boundary_max_error || rep.boundary_witness.empty()) {
            rep.boundary_max_error = err;
            std::ostringstream os;
            os << condition << " at t = " << t;
            rep.boundary_witness = os.str();
        }
    };
    for (int k = 0; k <= grid; ++k) {
        const double t = grid_pt(k);
        note(std::fabs(C.checked(t, 0.0)), "C(t,0) = 0", t);
        note(std::fabs(C.checked(0.0, t)), "C(0,t) = 0", t);
        note(std::fabs(C.checked(t, 1.0) - t), "C(t,1) = t", t);
        note(std::fabs(C.checked(1.0, t) - t), "C(1,t) = t", t);
    }
    const auto cert = monotone::certify(C, Rect{0.0, 1.0, 0.0, 1.0}, std::max(grid, 2),
                                        monotone::CertifyOptions{tol, 0.0});
    rep.min_cell_measure = cert.min_cell_measure;
    rep.min_cell_witness = cert.min_witness;
    rep.pass = rep.boundary_max_error <= tol && rep.min_cell_measure >= -tol;
    return rep;
}

} // namespace steff2d::copula
