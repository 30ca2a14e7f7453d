/**
 * @file quad.cpp
 * @brief Adaptive tensor Gauss-Legendre quadrature, cumulative primitives,
 *        Riemann-Stieltjes sums and mollification.
 */
#include "steff2d/quad.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "steff2d/parallel.hpp"

namespace steff2d::quad {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::string format_point(double x, double y) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x << ", " << y << ")";
    return os.str();
}

double finite_or_throw(double v, double x, double y) {
    if (!std::isfinite(v))
        throw DomainError("integrand is not finite at " + format_point(x, y));
    return v;
}

std::vector<double> axis_cuts(double lo, double hi, int cells, const std::vector<double>& breaks) {
    std::vector<double> cuts;
    cuts.reserve(cells + 1 + breaks.size());
    for (int i = 0; i <= cells; ++i) cuts.push_back(i == cells ? hi : lo + (hi - lo) * i / cells);
    for (double b : breaks)
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const double eps = 1e-14 * std::max(1.0, std::fabs(hi - lo));
    std::vector<double> out;
    for (double v : cuts)
        if (out.empty() || v - out.back() > eps) out.push_back(v);
    if (out.back() != hi) out.back() = hi;
    return out;
}

class TensorRule {
public:
    TensorRule(const Integrand2& f, const GaussLegendreRule& rule) : f_(f), rule_(rule) {}

    double cell(double x0, double x1, double y0, double y1) const {
        const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
        const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
            const double x = mx + hx * rule_.nodes[i];
            double row = 0.0;
            for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
                const double y = my + hy * rule_.nodes[j];
                row += rule_.weights[j] * finite_or_throw(f_(x, y), x, y);
            }
            sum += rule_.weights[i] * row;
        }
        return sum * hx * hy;
    }

private:
    const Integrand2& f_;
    const GaussLegendreRule& rule_;
};

struct Cell2 {
    double x0, x1, y0, y1;
    double kids[4];
    double refined;
    double err;
};

struct ByError {
    bool operator()(const Cell2& a, const Cell2& b) const { return a.err < b.err; }
};

Cell2 make_cell2(const TensorRule& rule, double x0, double x1, double y0, double y1, double coarse) {
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    Cell2 c{x0, x1, y0, y1, {}, 0.0, 0.0};
    c.kids[0] = rule.cell(x0, xm, y0, ym);
    c.kids[1] = rule.cell(xm, x1, y0, ym);
    c.kids[2] = rule.cell(x0, xm, ym, y1);
    c.kids[3] = rule.cell(xm, x1, ym, y1);
    c.refined = (c.kids[0] + c.kids[1]) + (c.kids[2] + c.kids[3]);
    c.err = std::fabs(c.refined - coarse);
    return c;
}

struct Cell1 {
    double lo, hi;
    double kids[2];
    double refined;
    double err;
};

struct ByError1 {
    bool operator()(const Cell1& a, const Cell1& b) const { return a.err < b.err; }
};

} // namespace

// ------------------------------------------------------------------ spec and rule

void QuadratureSpec::validate() const {
    if (cells < 1) throw InvalidArgument("quadrature cells must be >= 1");
    if (points < 1 || points > 64) throw InvalidArgument("quadrature points must be in 1..64");
    if (max_refinements < 0) throw InvalidArgument("refinement limit must be >= 0");
    if (!(tolerance > 0.0)) throw InvalidArgument("quadrature tolerance must be > 0");
    for (double b : breaks_x)
        if (!std::isfinite(b)) throw InvalidArgument("breakpoints must be finite");
    for (double b : breaks_y)
        if (!std::isfinite(b)) throw InvalidArgument("breakpoints must be finite");
}

QuadratureSpec QuadratureSpec::with_integer_breaks(const Rect& r) const {
    QuadratureSpec s = *this;
    for (double k = std::floor(r.a) + 1.0; k < r.b; k += 1.0) s.breaks_x.push_back(k);
    for (double k = std::floor(r.c) + 1.0; k < r.d; k += 1.0) s.breaks_y.push_back(k);
    return s;
}

const GaussLegendreRule& gauss_legendre(int points) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> rules;
    if (points < 1 || points > 64) throw InvalidArgument("Gauss-Legendre order must be in 1..64");
    std::lock_guard lock(mutex);
    auto& slot = rules[points];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(points));
    return *slot;
}

// ------------------------------------------------------------------ integration

QuadratureResult integrate2d(const Integrand2& f, const Rect& r, const QuadratureSpec& spec) {
    spec.validate();
    const TensorRule rule(f, gauss_legendre(spec.points));
    const auto xs = axis_cuts(r.a, r.b, spec.cells, spec.breaks_x);
    const auto ys = axis_cuts(r.c, r.d, spec.cells, spec.breaks_y);

    std::priority_queue<Cell2, std::vector<Cell2>, ByError> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const double coarse = rule.cell(xs[i], xs[i + 1], ys[j], ys[j + 1]);
            Cell2 c = make_cell2(rule, xs[i], xs[i + 1], ys[j], ys[j + 1], coarse);
            total += c.refined;
            total_err += c.err;
            heap.push(c);
        }

    const double min_width = 1e-13 * std::max(r.width(), r.height());
    int refinements = 0;
    while (total_err > std::max(spec.tolerance, spec.tolerance * std::fabs(total))) {
        const Cell2 worst = heap.top();
        if (refinements >= spec.max_refinements || worst.x1 - worst.x0 < min_width) {
            std::ostringstream os;
            os << "2D quadrature did not reach tolerance " << spec.tolerance << " after "
               << refinements << " refinements (error estimate " << total_err << ")";
            throw NonConvergence(os.str());
        }
        heap.pop();
        ++refinements;
        total -= worst.refined;
        total_err -= worst.err;
        const double xm = 0.5 * (worst.x0 + worst.x1), ym = 0.5 * (worst.y0 + worst.y1);
        const Cell2 kids[4] = {
            make_cell2(rule, worst.x0, xm, worst.y0, ym, worst.kids[0]),
            make_cell2(rule, xm, worst.x1, worst.y0, ym, worst.kids[1]),
            make_cell2(rule, worst.x0, xm, ym, worst.y1, worst.kids[2]),
            make_cell2(rule, xm, worst.x1, ym, worst.y1, worst.kids[3]),
        };
        for (const Cell2& k : kids) {
            total += k.refined;
            total_err += k.err;
            heap.push(k);
        }
        // Periodic exact re-summation keeps the running totals from drifting.
        if (refinements % 512 == 0) {
            auto copy = heap;
            total = total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().refined;
                total_err += copy.top().err;
                copy.pop();
            }
        }
    }

    QuadratureResult out;
    out.cells = heap.size();
    std::vector<Cell2> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    // Sum in geometric order so the result does not depend on heap tie-breaking.
    std::sort(leaves.begin(), leaves.end(), [](const Cell2& p, const Cell2& q) {
        return p.x0 != q.x0 ? p.x0 < q.x0 : p.y0 < q.y0;
    });
    for (const Cell2& c : leaves) {
        out.value += c.refined;
        out.error_estimate += c.err;
    }
    return out;
}

QuadratureResult integrate2d(const BivariateFn& f, const Rect& r, const QuadratureSpec& spec) {
    return integrate2d(Integrand2([&f](double x, double y) { return f(x, y); }), r, spec);
}

QuadratureResult integrate1d(const Integrand1& f, double lo, double hi, const QuadratureSpec& spec,
                             std::span<const double> breaks) {
    spec.validate();
    if (!(lo < hi)) throw InvalidArgument("integrate1d needs lo < hi");
    const GaussLegendreRule& rule = gauss_legendre(spec.points);
    auto gl = [&](double a, double b) {
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = m + h * rule.nodes[i];
            s += rule.weights[i] * finite_or_throw(f(x), x, 0.0);
        }
        return s * h;
    };
    auto make = [&](double a, double b, double coarse) {
        const double m = 0.5 * (a + b);
        Cell1 c{a, b, {gl(a, m), gl(m, b)}, 0.0, 0.0};
        c.refined = c.kids[0] + c.kids[1];
        c.err = std::fabs(c.refined - coarse);
        return c;
    };

    const auto cuts = axis_cuts(lo, hi, spec.cells, std::vector<double>(breaks.begin(), breaks.end()));
    std::priority_queue<Cell1, std::vector<Cell1>, ByError1> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Cell1 c = make(cuts[i], cuts[i + 1], gl(cuts[i], cuts[i + 1]));
        total += c.refined;
        total_err += c.err;
        heap.push(c);
    }
    const double min_width = 1e-13 * (hi - lo);
    int refinements = 0;
    while (total_err > std::max(spec.tolerance, spec.tolerance * std::fabs(total))) {
        const Cell1 worst = heap.top();
        if (refinements >= spec.max_refinements || worst.hi - worst.lo < min_width) {
            std::ostringstream os;
            os << "1D quadrature did not reach tolerance " << spec.tolerance << " after "
               << refinements << " refinements (error estimate " << total_err << ")";
            throw NonConvergence(os.str());
        }
        heap.pop();
        ++refinements;
        total -= worst.refined;
        total_err -= worst.err;
        const double m = 0.5 * (worst.lo + worst.hi);
        for (const Cell1& k : {make(worst.lo, m, worst.kids[0]), make(m, worst.hi, worst.kids[1])}) {
            total += k.refined;
            total_err += k.err;
            heap.push(k);
        }
    }
    std::vector<Cell1> leaves;
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Cell1& p, const Cell1& q) { return p.lo < q.lo; });
    QuadratureResult out;
    out.cells = leaves.size();
    for (const Cell1& c : leaves) {
        out.value += c.refined;
        out.error_estimate += c.err;
    }
    return out;
}

double integrate_box(const Integrand2& f, double x0, double x1, double y0, double y1,
                     const QuadratureSpec& spec) {
    if (x0 == x1 || y0 == y1) return 0.0;
    double sign = 1.0;
    if (x1 < x0) {
        std::swap(x0, x1);
        sign = -sign;
    }
    if (y1 < y0) {
        std::swap(y0, y1);
        sign = -sign;
    }
    return sign * integrate2d(f, Rect::make(x0, x1, y0, y1), spec).value;
}

// ------------------------------------------------------------------ cumulative primitive

struct CumulativePrimitive::Cache {
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
            return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
        }
    };
    std::mutex mutex;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, KeyHash> values;
};

CumulativePrimitive::CumulativePrimitive(BivariateFn w, const Rect& r, Orientation orientation,
                                         QuadratureSpec spec)
    : w_(std::move(w)),
      rect_(r),
      orientation_(orientation),
      spec_(std::move(spec)),
      cache_(std::make_shared<Cache>()) {
    spec_.validate();
}

double CumulativePrimitive::operator()(double x, double y) const {
    const std::pair key{std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y)};
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    const bool lower = orientation_ == Orientation::Lower;
    const double x0 = lower ? rect_.a : x, x1 = lower ? x : rect_.b;
    const double y0 = lower ? rect_.c : y, y1 = lower ? y : rect_.d;

    // Scale the coarse mesh with the sub-box so small boxes stay cheap.
    QuadratureSpec sub = spec_;
    const double frac = std::max(std::fabs(x1 - x0) / rect_.width(), std::fabs(y1 - y0) / rect_.height());
    sub.cells = std::max(1, static_cast<int>(std::ceil(spec_.cells * frac - 1e-9)));
    const Integrand2 integrand = [this](double s, double t) { return w_(s, t); };
    const double v = integrate_box(integrand, x0, x1, y0, y1, sub);

    std::lock_guard lock(cache_->mutex);
    cache_->values.emplace(key, v);
    return v;
}

LatticeExtrema CumulativePrimitive::lattice_extrema(int grid) const {
    if (grid < 1) throw InvalidArgument("lattice grid must be >= 1");
    const std::size_t n = static_cast<std::size_t>(grid) + 1;
    std::vector<double> values(n * n);
    parallel_for(n, [&](std::size_t i) {
        const double x = i + 1 == n ? rect_.b : rect_.a + rect_.width() * i / grid;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = j + 1 == n ? rect_.d : rect_.c + rect_.height() * j / grid;
            values[i * n + j] = (*this)(x, y);
        }
    });
    LatticeExtrema e;
    e.grid = grid;
    e.min = e.max = values[0];
    e.argmin = e.argmax = Point{rect_.a, rect_.c};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values[i * n + j];
            const Point p{i + 1 == n ? rect_.b : rect_.a + rect_.width() * i / grid,
                          j + 1 == n ? rect_.d : rect_.c + rect_.height() * j / grid};
            if (v < e.min) {
                e.min = v;
                e.argmin = p;
            }
            if (v > e.max) {
                e.max = v;
                e.argmax = p;
            }
        }
    return e;
}

BivariateFn CumulativePrimitive::as_function() const {
    auto self = std::make_shared<CumulativePrimitive>(*this);
    return BivariateFn([self](double x, double y) { return (*self)(x, y); },
                       std::string(orientation_ == Orientation::Lower ? "W" : "W~") + "[" +
                           w_.label() + "]");
}

CumulativePrimitive cumulative(const BivariateFn& w, const Rect& r, Orientation orientation,
                               const QuadratureSpec& spec) {
    return CumulativePrimitive(w, r, orientation, spec);
}

// ------------------------------------------------------------------ Stieltjes sums

StieltjesSum stieltjes_sum(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                           std::size_t partition) {
    if (partition < 1) throw InvalidArgument("partition must be >= 1");
    const std::size_t n = partition;
    auto xs = [&](std::size_t i) { return i == n ? r.b : r.a + r.width() * i / n; };
    auto ys = [&](std::size_t j) { return j == n ? r.d : r.c + r.height() * j / n; };

    struct RowResult {
        double sum = 0.0;
        double sup_h = 0.0;
        double min_cell = std::numeric_limits<double>::infinity();
    };
    std::vector<RowResult> rows(n);
    // Row i covers cells [x_i, x_{i+1}] x [y_j, y_{j+1}].
    parallel_for(n, [&](std::size_t i) {
        std::vector<double> left(n + 1), right(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            left[j] = f.checked(xs(i), ys(j));
            right[j] = f.checked(xs(i + 1), ys(j));
        }
        RowResult out;
        const double xm = 0.5 * (xs(i) + xs(i + 1));
        for (std::size_t j = 0; j < n; ++j) {
            const double measure = left[j] - left[j + 1] - right[j] + right[j + 1];
            const double hv = h.checked(xm, 0.5 * (ys(j) + ys(j + 1)));
            out.sum += hv * measure;
            out.sup_h = std::max(out.sup_h, std::fabs(hv));
            out.min_cell = std::min(out.min_cell, measure);
        }
        for (std::size_t j = 0; j <= n; ++j) {
            out.sup_h = std::max(out.sup_h, std::fabs(h.checked(xs(i), ys(j))));
            if (i + 1 == n) out.sup_h = std::max(out.sup_h, std::fabs(h.checked(xs(n), ys(j))));
        }
        rows[i] = out;
    });

    StieltjesSum s;
    s.min_cell_measure = std::numeric_limits<double>::infinity();
    for (const RowResult& row : rows) {
        s.value += row.sum;
        s.sup_abs_h = std::max(s.sup_abs_h, row.sup_h);
        s.min_cell_measure = std::min(s.min_cell_measure, row.min_cell);
    }
    s.total_measure = f.checked(r.a, r.c) - f.checked(r.a, r.d) - f.checked(r.b, r.c) +
                      f.checked(r.b, r.d);
    return s;
}

StieltjesResult stieltjes2d(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                            std::size_t partition, const StieltjesOptions& options) {
    if (partition < 1) throw InvalidArgument("partition must be >= 1");
    if (!(options.tolerance > 0.0)) throw InvalidArgument("Stieltjes tolerance must be > 0");

    StieltjesSum prev = stieltjes_sum(h, f, r, partition);
    double prev_value = prev.value;
    bool have_prev_value = !options.richardson;
    std::size_t n = partition;
    for (;;) {
        if (2 * n > options.max_partition) {
            std::ostringstream os;
            os << "Stieltjes sums did not settle to " << options.tolerance << " below partition "
               << options.max_partition;
            throw NonConvergence(os.str());
        }
        n *= 2;
        const StieltjesSum cur = stieltjes_sum(h, f, r, n);
        const double value =
            options.richardson ? (4.0 * cur.value - prev.value) / 3.0 : cur.value;
        const double diff = std::fabs(value - prev_value);
        prev = cur;
        if (have_prev_value &&
            diff <= std::max(options.tolerance, options.tolerance * std::fabs(value))) {
            StieltjesResult out;
            out.value = value;
            out.partition = n;
            out.last_difference = diff;
            out.min_cell_measure = cur.min_cell_measure;
            out.integrator_monotone = cur.min_cell_measure >= -options.monotone_tolerance;
            out.bound = cur.total_measure * cur.sup_abs_h;
            out.bound_holds = std::fabs(cur.value) <= out.bound + 1e-10;
            if (!out.integrator_monotone)
                out.warning = "integrator is not 2d-monotone on the partition; bound not asserted";
            return out;
        }
        prev_value = value;
        have_prev_value = true;
    }
}

IdentityResidual stieltjes_vs_riemann(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                                      const QuadratureSpec& spec, double tolerance,
                                      const StieltjesOptions& options) {
    const BivariateFn fxy = f.dxy();
    const StieltjesResult st = stieltjes2d(h, f, r, 16, options);
    const double riemann =
        integrate2d(Integrand2([&](double x, double y) { return h(x, y) * fxy(x, y); }), r, spec).value;
    return IdentityResidual::make(st.value, riemann, tolerance);
}

// ------------------------------------------------------------------ mollifier

double bump(double x, double y) {
    const double r2 = x * x + y * y;
    return r2 < 1.0 ? std::exp(1.0 / (r2 - 1.0)) : 0.0;
}

double mollifier_constant() {
    static const double c = [] {
        QuadratureSpec spec;
        spec.cells = 4;
        spec.tolerance = 1e-12;
        return integrate2d(Integrand2(bump), Rect{-1.0, 1.0, -1.0, 1.0}, spec).value;
    }();
    return c;
}

Mollifier::Mollifier(int n) : n_(n), c_(mollifier_constant()) {
    if (n < 1) throw InvalidArgument("mollifier index must be >= 1");
}

double Mollifier::operator()(double x, double y) const {
    const double nn = static_cast<double>(n_);
    return nn * nn * bump(nn * x, nn * y) / c_;
}

double Mollifier::mass(const QuadratureSpec& spec) const {
    const double r = radius();
    return integrate2d(Integrand2([this](double x, double y) { return (*this)(x, y); }),
                       Rect{-r, r, -r, r}, spec)
        .value;
}

BivariateFn mollify(const BivariateFn& f, const Rect& r, int n, const QuadratureSpec& spec) {
    const Mollifier rho(n);
    spec.validate();
    auto fn = [f, r, rho, spec](double x, double y) {
        const double rad = rho.radius();
        const Integrand2 integrand = [&](double s, double t) {
            const double k = rho(s, t);
            if (k == 0.0) return 0.0;
            return k * f(std::clamp(x - s, r.a, r.b), std::clamp(y - t, r.c, r.d));
        };
        return integrate2d(integrand, Rect{-rad, rad, -rad, rad}, spec).value;
    };
    return BivariateFn(std::move(fn), "mollify[" + f.label() + ", n=" + std::to_string(n) + "]");
}

} // namespace steff2d::quad
