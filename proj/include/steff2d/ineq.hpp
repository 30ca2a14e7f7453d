/**
 * @file ineq.hpp
 * @brief Numerical verification of Young's integration-by-parts identities,
 *        the integral Abel-Steffensen inequalities, the Fourier sign results,
 *        the Stieltjes integration-by-parts formula and the double-sum formula.
 */
#pragma once

#include <string>
#include <string_view>

#include "steff2d/bivariate.hpp"
#include "steff2d/monotone.hpp"
#include "steff2d/quad.hpp"

namespace steff2d::ineq {

enum class YoungVariant {
    Y1,  ///< expansion around (b,d) with W from (a,c)
    Y2,  ///< expansion around (a,c) with W-tilde towards (b,d)
};

/// Individual right-hand-side terms. For Y1 rhs = corner - edge_x - edge_y + interior,
/// for Y2 rhs = corner + edge_x + edge_y + interior.
struct YoungTerms {
    double corner = 0.0;
    double edge_x = 0.0;
    double edge_y = 0.0;
    double interior = 0.0;
};

struct YoungReport {
    YoungVariant variant = YoungVariant::Y1;
    IdentityResidual residual;
    YoungTerms terms;
};

/// f must be expression-backed (its partials are taken symbolically).
YoungReport young_residual(YoungVariant variant, const BivariateFn& f, const BivariateFn& w,
                           const Rect& r, const quad::QuadratureSpec& spec = {},
                           double tolerance = 1e-6);

enum class Theorem {
    Thm3,     ///< 2d-monotone decreasing f, W >= 0: int f w >= f(b,d) W(b,d)
    Thm4,     ///< 2d-monotone increasing f, W~ >= 0: int f w >= f(a,c) W~(a,c)
    Remark3,  ///< 2d-alternating f, W <= 0: int f (-w) <= f(b,d) (-W(b,d))
};

std::string_view to_string(Theorem t);

struct SteffensenOptions {
    int grid = 32;                      ///< certification and primitive lattice
    double tolerance = 1e-6;            ///< slack on the inequality
    double certify_tolerance = 1e-9;
    double primitive_tolerance = 1e-9;  ///< slack on the sign of W / W~
};

struct TheoremReport {
    Theorem theorem = Theorem::Thm3;
    monotone::MonotonicityReport certification;
    bool monotonicity_ok = false;  ///< verdict matches the theorem's class
    bool edges_ok = false;         ///< sign of the edge partials via lattice edge monotonicity
    double primitive_min = 0.0;    ///< lattice extrema of W (thm3, remark3) or W~ (thm4)
    double primitive_max = 0.0;
    bool primitive_ok = false;
    bool f_nonnegative = false;
    double lhs = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    bool inequality_holds = false;

    bool hypotheses_hold() const { return monotonicity_ok && edges_ok && primitive_ok; }
};

/// Evaluates hypotheses and both sides independently; a failed hypothesis is
/// reported but does not stop the evaluation. For Remark3 the sides are
/// stated for -w, so lhs = -int f w and bound = -f(b,d) W(b,d).
TheoremReport steffensen_integral(Theorem theorem, const BivariateFn& f, const BivariateFn& w,
                                  const Rect& r, const quad::QuadratureSpec& spec = {},
                                  const SteffensenOptions& options = {});

enum class FourierKernel { SinSin2d, CosCos2d, Cos1d, Sin1d };

std::string_view to_string(FourierKernel k);

enum class ExpectedSign { Nonnegative, Unconstrained };

struct FourierReport {
    FourierKernel kernel = FourierKernel::SinSin2d;
    double value = 0.0;
    ExpectedSign expected_sign = ExpectedSign::Unconstrained;
    /// Sampled monotonicity/convexity of f (the hypotheses behind the sign claim).
    bool hypotheses_hold = false;
    double tolerance = 0.0;
    bool sign_holds = true;  ///< value >= -tol whenever a sign is expected
};

/// sinsin2d: int_0^{2pi} int_0^{2pi} f(s+t) sin(ms) sin(nt) with univariate f on [0, 4pi];
/// coscos2d: int int f(x,y) cos(mx) cos(ny) with bivariate f;
/// cos1d / sin1d: int_0^{2pi} f(x) cos(nx) / sin(nx) dx (m unused).
FourierReport fourier_check(FourierKernel kernel, const expr::Expr& f, int m, int n,
                            const quad::QuadratureSpec& spec = {}, double tolerance = 1e-8);

struct BypartsReport {
    IdentityResidual residual;
    YoungTerms terms;              ///< corner, edge_x, edge_y and the Stieltjes term as interior
    bool g_vanishes_lower_left = false;
    std::size_t stieltjes_partition = 0;
};

/// int f dg (through the mixed density of g) against
/// f(b,d)g(b,d) - int f_x(x,d) g(x,d) dx - int f_y(b,y) g(b,y) dy + int g df.
BypartsReport byparts_residual(const BivariateFn& f, const monotone::AcRepresentation& g,
                               const Rect& r, const quad::QuadratureSpec& spec = {},
                               double tolerance = 1e-6);

struct SumIntegralTerms {
    double integral = 0.0;  ///< int int f
    double x_term = 0.0;    ///< int int f_x {x}
    double y_term = 0.0;    ///< int int f_y {y}
    double xy_term = 0.0;   ///< int int f_xy {x}{y}
};

struct SumIntegralReport {
    IdentityResidual residual;
    SumIntegralTerms terms;
};

/// Sum of f over the integer points of (a,b] x (c,d] against the integral
/// form with fractional-part weights. Corners must be integers.
SumIntegralReport sum_vs_integral(const BivariateFn& f, const Rect& r,
                                  const quad::QuadratureSpec& spec = {}, double tolerance = 1e-6);

} // namespace steff2d::ineq
