/**
 * @file discrete.hpp
 * @brief Two-dimensional Abel partial summation and the discrete
 *        Abel-Steffensen inequality for double sequences.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "steff2d/bivariate.hpp"

namespace steff2d::discrete {

/// p x q real matrix addressed with 1-based indices.
class DoubleSequence {
public:
    DoubleSequence(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Builds from row vectors; all rows must have the same nonzero length.
    static DoubleSequence from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

    std::vector<std::vector<double>> to_rows() const;
    bool same_shape(const DoubleSequence& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const;

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Second-difference table of a double sequence. Interior slots hold
/// a(i,j)-a(i+1,j)-a(i,j+1)+a(i+1,j+1), the last column a(i,q)-a(i+1,q), the
/// last row a(p,j)-a(p,j+1), and the (p,q) slot holds a(p,q) itself.
using DeltaTable = DoubleSequence;

/// S(i,j) = sum_{k<=i, l<=j} u(k,l).
DoubleSequence partial_sums(const DoubleSequence& u);

/// Inverse of partial_sums: u(i,j) = S(i,j)-S(i-1,j)-S(i,j-1)+S(i-1,j-1).
DoubleSequence difference(const DoubleSequence& s);

DeltaTable delta_table(const DoubleSequence& a);

/// Inverse of delta_table: a(i,j) = sum_{k>=i, l>=j} Delta(k,l).
DoubleSequence integrate_delta(const DeltaTable& delta);

/// LHS = sum a*u, RHS = the partial-summation form sum Delta(i,j) S(i,j);
/// relative residual is taken against max(1, |LHS|).
IdentityResidual hardy_residual(const DoubleSequence& a, const DoubleSequence& u,
                                double tolerance = 1e-12);

using Index = std::pair<std::size_t, std::size_t>;

struct SteffensenReport {
    bool nonneg_a = true;
    bool nonneg_delta = true;
    bool nonneg_partial_sums = true;
    std::optional<Index> first_negative_a;
    std::optional<Index> first_negative_delta;
    std::optional<Index> first_negative_partial_sum;
    double sum = 0.0;
    double tolerance = 0.0;
    bool conclusion_holds = false;

    bool hypotheses_hold() const { return nonneg_a && nonneg_delta && nonneg_partial_sums; }
};

/// Evaluates every hypothesis of the discrete inequality (each against -tol)
/// and the conclusion sum a*u >= -tol independently.
SteffensenReport steffensen_check(const DoubleSequence& a, const DoubleSequence& u,
                                  double tol = 1e-12);

/// Random hypothesis-satisfying pair: a integrated from a nonnegative Delta
/// table, u differenced from nonnegative partial sums.
std::pair<DoubleSequence, DoubleSequence> random_steffensen_pair(std::size_t p, std::size_t q,
                                                                 std::mt19937_64& rng);

} // namespace steff2d::discrete
