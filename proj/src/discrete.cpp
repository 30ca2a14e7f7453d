#include "steff2d/discrete.hpp"

#include <cmath>
#include <string>

namespace steff2d::discrete {

namespace {

void require_same_shape(const DoubleSequence& a, const DoubleSequence& u) {
    if (!a.same_shape(u))
        throw InvalidArgument("dimension mismatch: " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(u.rows()) + "x" +
                              std::to_string(u.cols()));
}

} // namespace

DoubleSequence::DoubleSequence(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw InvalidArgument("double sequence needs p, q >= 1");
    if (!std::isfinite(fill)) throw InvalidArgument("double sequence entries must be finite");
}

DoubleSequence DoubleSequence::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw InvalidArgument("double sequence needs p, q >= 1");
    DoubleSequence s(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != s.cols())
            throw InvalidArgument("ragged matrix: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(s.cols()));
        for (std::size_t j = 0; j < s.cols(); ++j) {
            if (!std::isfinite(rows[i][j]))
                throw InvalidArgument("double sequence entries must be finite");
            s(i + 1, j + 1) = rows[i][j];
        }
    }
    return s;
}

std::vector<std::vector<double>> DoubleSequence::to_rows() const {
    std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i][j] = data_[i * cols_ + j];
    return out;
}

std::size_t DoubleSequence::index(std::size_t i, std::size_t j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_)
        throw InvalidArgument("index (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside 1.." + std::to_string(rows_) + " x 1.." +
                              std::to_string(cols_));
    return (i - 1) * cols_ + (j - 1);
}

DoubleSequence partial_sums(const DoubleSequence& u) {
    const std::size_t p = u.rows(), q = u.cols();
    DoubleSequence s(p, q);
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j) {
            double v = u(i, j);
            if (i > 1) v += s(i - 1, j);
            if (j > 1) v += s(i, j - 1);
            if (i > 1 && j > 1) v -= s(i - 1, j - 1);
            s(i, j) = v;
        }
    return s;
}

DoubleSequence difference(const DoubleSequence& s) {
    const std::size_t p = s.rows(), q = s.cols();
    DoubleSequence u(p, q);
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j) {
            double v = s(i, j);
            if (i > 1) v -= s(i - 1, j);
            if (j > 1) v -= s(i, j - 1);
            if (i > 1 && j > 1) v += s(i - 1, j - 1);
            u(i, j) = v;
        }
    return u;
}

DeltaTable delta_table(const DoubleSequence& a) {
    const std::size_t p = a.rows(), q = a.cols();
    DeltaTable delta(p, q);
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j) {
            if (i < p && j < q)
                delta(i, j) = a(i, j) - a(i + 1, j) - a(i, j + 1) + a(i + 1, j + 1);
            else if (i < p)
                delta(i, j) = a(i, q) - a(i + 1, q);
            else if (j < q)
                delta(i, j) = a(p, j) - a(p, j + 1);
            else
                delta(i, j) = a(p, q);
        }
    return delta;
}

DoubleSequence integrate_delta(const DeltaTable& delta) {
    const std::size_t p = delta.rows(), q = delta.cols();
    DoubleSequence a(p, q);
    for (std::size_t i = p; i >= 1; --i)
        for (std::size_t j = q; j >= 1; --j) {
            double v = delta(i, j);
            if (i < p) v += a(i + 1, j);
            if (j < q) v += a(i, j + 1);
            if (i < p && j < q) v -= a(i + 1, j + 1);
            a(i, j) = v;
        }
    return a;
}

IdentityResidual hardy_residual(const DoubleSequence& a, const DoubleSequence& u,
                                double tolerance) {
    require_same_shape(a, u);
    const DeltaTable delta = delta_table(a);
    const DoubleSequence s = partial_sums(u);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 1; i <= a.rows(); ++i)
        for (std::size_t j = 1; j <= a.cols(); ++j) {
            lhs += a(i, j) * u(i, j);
            rhs += delta(i, j) * s(i, j);
        }
    return IdentityResidual::make(lhs, rhs, tolerance);
}

SteffensenReport steffensen_check(const DoubleSequence& a, const DoubleSequence& u, double tol) {
    require_same_shape(a, u);
    const DeltaTable delta = delta_table(a);
    const DoubleSequence s = partial_sums(u);
    SteffensenReport r;
    r.tolerance = tol;
    for (std::size_t i = 1; i <= a.rows(); ++i)
        for (std::size_t j = 1; j <= a.cols(); ++j) {
            if (a(i, j) < -tol && !r.first_negative_a) r.first_negative_a = Index{i, j};
            if (delta(i, j) < -tol && !r.first_negative_delta) r.first_negative_delta = Index{i, j};
            if (s(i, j) < -tol && !r.first_negative_partial_sum)
                r.first_negative_partial_sum = Index{i, j};
            r.sum += a(i, j) * u(i, j);
        }
    r.nonneg_a = !r.first_negative_a;
    r.nonneg_delta = !r.first_negative_delta;
    r.nonneg_partial_sums = !r.first_negative_partial_sum;
    r.conclusion_holds = r.sum >= -tol;
    return r;
}

std::pair<DoubleSequence, DoubleSequence> random_steffensen_pair(std::size_t p, std::size_t q,
                                                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DeltaTable delta(p, q);
    DoubleSequence s(p, q);
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j) {
            delta(i, j) = unit(rng);
            s(i, j) = unit(rng);
        }
    return {integrate_delta(delta), difference(s)};
}

} // namespace steff2d::discrete
