/**
 * @file copula.hpp
 * @brief Archimedean copulas from generator expressions and grid validation
 *        of the copula axioms (boundary conditions and 2-increasing).
 */
#pragma once

#include <cmath>
#include <string>

#include "steff2d/bivariate.hpp"

namespace steff2d::copula {

/// Generator phi: [0,1] -> [0, inf], phi(1) = 0, strictly decreasing and
/// convex. Construction samples phi and throws InvalidArgument on violation.
class Generator {
public:
    explicit Generator(expr::Expr phi, int samples = 256);
    static Generator parse(std::string_view src, int samples = 256);

    double operator()(double t) const;
    /// phi(0+), possibly +inf (strict generator).
    double at_zero() const { return phi_zero_; }
    bool strict() const { return std::isinf(phi_zero_); }
    /// Pseudo-inverse: bisection on [0,1]; arguments >= phi(0+) map to 0.
    double inverse(double s) const;
    const UnivariateFn& phi() const { return phi_; }

    // Diagnostics from the sampled checks.
    double value_at_one() const { return phi_one_; }
    double min_second_difference() const { return min_second_diff_; }

private:
    UnivariateFn phi_;
    double phi_zero_ = 0.0;
    double phi_one_ = 0.0;
    double min_second_diff_ = 0.0;
};

/// A(x,y) = phi^[-1](min(phi(x) + phi(y), phi(0+))).
BivariateFn archimedean(const Generator& gen);

struct CopulaReport {
    double boundary_max_error = 0.0;
    std::string boundary_witness;  ///< which condition and where the max error occurs
    double min_cell_measure = 0.0;
    Rect min_cell_witness;
    int grid = 0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Checks C(x,0) = C(0,y) = 0, C(x,1) = x, C(1,y) = y at grid+1 points per
/// side and the sign of every cell measure of a grid x grid partition.
CopulaReport validate_copula(const BivariateFn& C, int grid, double tol = 1e-9);

} // namespace steff2d::copula
