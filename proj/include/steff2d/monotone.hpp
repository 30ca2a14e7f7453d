/**
 * @file monotone.hpp
 * @brief f-measures, lattice certification of 2d-monotonicity and the
 *        standard 2d-monotone / 2d-alternating example functions.
 */
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "steff2d/bivariate.hpp"
#include "steff2d/quad.hpp"

namespace steff2d::monotone {

/// [f; r] = f(a,c) - f(a,d) - f(b,c) + f(b,d). Throws DomainError.
double f_measure(const BivariateFn& f, const Rect& r);

/// Second-difference quotient f_measure(f, [x,x+h]x[y,y+h]) / h^2.
double mixed_partial_fd(const BivariateFn& f, double x, double y, double h);

enum class Verdict { Monotone2d, Alternating2d, Modular, Indefinite };

std::string_view to_string(Verdict v);

/// Monotonicity of f along the four sides of the lattice and along every
/// lattice row/column. "decreasing" means nonincreasing within the tolerance.
struct EdgeFlags {
    bool top_decreasing = false;     ///< x -> f(x, d)
    bool top_increasing = false;
    bool right_decreasing = false;   ///< y -> f(b, y)
    bool right_increasing = false;
    bool bottom_decreasing = false;  ///< x -> f(x, c)
    bool bottom_increasing = false;
    bool left_decreasing = false;    ///< y -> f(a, y)
    bool left_increasing = false;
    bool x_decreasing = false;       ///< every lattice row
    bool x_increasing = false;
    bool y_decreasing = false;       ///< every lattice column
    bool y_increasing = false;
};

struct MonotonicityReport {
    Verdict verdict = Verdict::Indefinite;
    double min_cell_measure = 0.0;
    double max_cell_measure = 0.0;
    Rect min_witness;
    Rect max_witness;
    int grid = 0;
    double tolerance = 0.0;
    Rect lattice;  ///< rectangle actually sampled (domain shrunk by the margin)
    EdgeFlags edges;
    bool nonnegative = false;
    double min_value = 0.0;

    /// 2d-monotone and nonincreasing in each variable over the lattice.
    bool monotone_decreasing() const;
    /// 2d-monotone and nondecreasing in each variable over the lattice.
    bool monotone_increasing() const;
};

struct CertifyOptions {
    double tolerance = 1e-9;
    /// Inward shrink of the sampled lattice; unset means 1e-6 * diameter.
    std::optional<double> margin;
};

MonotonicityReport certify(const BivariateFn& f, const Rect& domain, int grid,
                           const CertifyOptions& options = {});

/// Builds a named example function. Names: E, C, Pi, log_pow (params: n),
/// neg_convex_diff (F), convex_sum (F, params: lambda), midpoint_gap (F),
/// exp_decay. `F` is a univariate expression in any one variable.
BivariateFn catalog(std::string_view name, std::span<const double> params = {},
                    const std::optional<expr::Expr>& F = std::nullopt);

/// f(x,y) = f0 + int_{x0}^x g1 + int_{y0}^y g2 + int_{x0}^x int_{y0}^y g,
/// the absolutely continuous representation anchored at `base`.
class AcRepresentation {
public:
    AcRepresentation(double f0, Point base, UnivariateFn g1, UnivariateFn g2, BivariateFn g,
                     quad::QuadratureSpec spec = {});

    double operator()(double x, double y) const;
    BivariateFn as_function() const;

    double f0() const { return f0_; }
    const Point& base() const { return base_; }
    const UnivariateFn& g1() const { return g1_; }
    const UnivariateFn& g2() const { return g2_; }
    const BivariateFn& density() const { return g_; }
    const quad::QuadratureSpec& spec() const { return spec_; }

private:
    double f0_;
    Point base_;
    UnivariateFn g1_, g2_;
    BivariateFn g_;
    quad::QuadratureSpec spec_;
    std::shared_ptr<quad::CumulativePrimitive> mixed_;
};

BivariateFn from_ac(double f0, Point base, const UnivariateFn& g1, const UnivariateFn& g2,
                    const BivariateFn& g, const quad::QuadratureSpec& spec = {});

} // namespace steff2d::monotone

namespace steff2d::monotone {

/// Cross-check of the lattice verdict against the sign of the symbolic mixed
/// partial at the interior lattice points.
struct MixedPartialConsistency {
    MonotonicityReport report;
    double mixed_partial_min = 0.0;
    double mixed_partial_max = 0.0;
    bool derivative_exact = true;  ///< false when floor/abs/min/max were differentiated
    bool consistent = false;
};

MixedPartialConsistency mixed_partial_consistency(const BivariateFn& f, const Rect& domain, int grid,
                                                  const CertifyOptions& options = {});

} // namespace steff2d::monotone
