/**
 * @file quad.hpp
 * @brief Tensor Gauss-Legendre quadrature on rectangles, cumulative
 *        primitives, Riemann-Stieltjes sums against bivariate integrators and
 *        mollification with the exponential bump.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "steff2d/bivariate.hpp"

namespace steff2d::quad {

struct QuadratureSpec {
    int cells = 2;                  ///< cells per axis at the coarsest level
    int points = 8;                 ///< Gauss-Legendre points per cell per axis
    int max_refinements = 20000;    ///< cell bisections before giving up
    double tolerance = 1e-8;        ///< absolute (or relative, whichever is looser)
    std::vector<double> breaks_x;   ///< interior cell boundaries on the x axis
    std::vector<double> breaks_y;

    void validate() const;  // throws InvalidArgument
    /// Copy with integer breakpoints at every integer strictly inside r.
    QuadratureSpec with_integer_breaks(const Rect& r) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  ///< sum of the last parent/children differences
    std::size_t cells = 0;        ///< leaf cells in the final mesh
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int points);

using Integrand2 = std::function<double(double, double)>;
using Integrand1 = std::function<double(double)>;

/// Composite tensor Gauss-Legendre with adaptive isotropic cell bisection:
/// the cell whose estimate changes most under bisection is split until the
/// summed changes fall below the tolerance. Throws DomainError on non-finite
/// integrand values and NonConvergence past the refinement limit.
QuadratureResult integrate2d(const Integrand2& f, const Rect& r, const QuadratureSpec& spec = {});
QuadratureResult integrate2d(const BivariateFn& f, const Rect& r, const QuadratureSpec& spec = {});

/// One-dimensional counterpart; `breaks` are interior interval boundaries.
QuadratureResult integrate1d(const Integrand1& f, double lo, double hi,
                             const QuadratureSpec& spec = {},
                             std::span<const double> breaks = {});

/// Integral over [x0,x1]x[y0,y1] for any corner ordering (oriented; zero area gives 0).
double integrate_box(const Integrand2& f, double x0, double x1, double y0, double y1,
                     const QuadratureSpec& spec);

enum class Orientation {
    Lower,  ///< integral over [a,x] x [c,y]
    Upper,  ///< integral over [x,b] x [y,d]
};

struct LatticeExtrema {
    double min = 0.0;
    double max = 0.0;
    Point argmin;
    Point argmax;
    int grid = 0;
};

/// W (lower) or W-tilde (upper) primitive of an integrand over a base
/// rectangle. Evaluations are memoized; the cache is internally synchronized.
class CumulativePrimitive {
public:
    CumulativePrimitive(BivariateFn w, const Rect& r, Orientation orientation,
                        QuadratureSpec spec = {});

    double operator()(double x, double y) const;

    /// Extrema over the (grid+1) x (grid+1) lattice of the base rectangle.
    LatticeExtrema lattice_extrema(int grid) const;

    const Rect& rect() const { return rect_; }
    Orientation orientation() const { return orientation_; }
    const BivariateFn& integrand() const { return w_; }
    BivariateFn as_function() const;

private:
    struct Cache;

    BivariateFn w_;
    Rect rect_;
    Orientation orientation_;
    QuadratureSpec spec_;
    std::shared_ptr<Cache> cache_;
};

CumulativePrimitive cumulative(const BivariateFn& w, const Rect& r, Orientation orientation,
                               const QuadratureSpec& spec = {});

// ------------------------------------------------------------------ Stieltjes

struct StieltjesOptions {
    double tolerance = 1e-8;          ///< on successive refinement levels
    std::size_t max_partition = 4096; ///< cells per axis before giving up
    /// Richardson-extrapolate consecutive midpoint sums (error O(N^-4) for smooth data).
    bool richardson = false;
    double monotone_tolerance = 1e-9; ///< cell measures above -tol count as nonnegative
};

struct StieltjesSum {
    double value = 0.0;
    double sup_abs_h = 0.0;        ///< over lattice corners and cell midpoints
    double min_cell_measure = 0.0;
    double total_measure = 0.0;    ///< f-measure of the whole rectangle
};

/// Midpoint-tagged Riemann-Stieltjes sum on an N x N partition.
StieltjesSum stieltjes_sum(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                           std::size_t partition);

struct StieltjesResult {
    double value = 0.0;
    double bound = 0.0;            ///< [f; r] * sup|h|
    std::size_t partition = 0;     ///< finest partition used
    double last_difference = 0.0;
    double min_cell_measure = 0.0;
    bool integrator_monotone = false;
    bool bound_holds = false;      ///< |value| <= bound + 1e-10; asserted only for monotone f
    std::string warning;
};

/// Doubles the partition from `partition` until successive values agree.
/// Throws NonConvergence when max_partition is exceeded.
StieltjesResult stieltjes2d(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                            std::size_t partition = 16, const StieltjesOptions& options = {});

/// Stieltjes sum against f versus the Riemann integral of h * d2f/dxdy.
IdentityResidual stieltjes_vs_riemann(const BivariateFn& h, const BivariateFn& f, const Rect& r,
                                      const QuadratureSpec& spec = {}, double tolerance = 1e-6,
                                      const StieltjesOptions& options = {});

// ------------------------------------------------------------------ mollifier

/// Unnormalized bump exp(1/(x^2+y^2-1)) on the open unit disk, 0 outside.
double bump(double x, double y);

/// Integral of the bump over the unit disk, computed once by quadrature.
double mollifier_constant();

/// rho_n(x,y) = n^2 rho(nx, ny) with rho = bump / c.
class Mollifier {
public:
    explicit Mollifier(int n);
    double operator()(double x, double y) const;
    int index() const { return n_; }
    double radius() const { return 1.0 / n_; }
    double normalization() const { return c_; }
    /// Quadrature of rho_n over its support square.
    double mass(const QuadratureSpec& spec = {}) const;

private:
    int n_;
    double c_;
};

/// (rho_n * f)(x,y), extending f beyond r by clamping coordinates into r.
BivariateFn mollify(const BivariateFn& f, const Rect& r, int n, const QuadratureSpec& spec = {});

} // namespace steff2d::quad
