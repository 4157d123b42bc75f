#include "oplab/complex_matrix.hpp"

#include <cmath>

namespace oplab {

namespace {

void check_dim(std::size_t n) {
    if (n < 1 || n > ComplexMatrix::max_dim)
        throw InvalidSpec("matrix dimension must be in [1, " +
                          std::to_string(ComplexMatrix::max_dim) + "], got " + std::to_string(n));
}

void check_same(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("matrix dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), a_(n * n, cplx(0.0, 0.0)) {
    check_dim(n);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    n_ = rows.size();
    check_dim(n_);
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw DimensionMismatch("row length does not match matrix dimension");
        for (const auto& v : row) a_.push_back(v);
    }
    require_valid("matrix literal");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = std::conj(a_[i]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    check_same(*this, rhs);
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = a_[i] + rhs.a_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    check_same(*this, rhs);
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = a_[i] - rhs.a_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    check_same(*this, rhs);
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < n_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n_; ++j) m(i, j) += aik * rhs(k, j);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator*(cplx s) const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = a_[i] * s;
    return m;
}

ComplexMatrix ComplexMatrix::operator-() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = -a_[i];
    return m;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& x) const {
    if (x.size() != n_) throw DimensionMismatch("vector length does not match matrix dimension");
    std::vector<cplx> y(n_, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

cplx ComplexMatrix::trace() const {
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::is_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void ComplexMatrix::require_valid(const char* context) const {
    if (empty()) throw InvalidSpec(std::string(context) + ": matrix is empty");
    if (!is_finite()) throw InvalidSpec(std::string(context) + ": matrix has non-finite entries");
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

double vector_norm(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("vector lengths differ");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

} // namespace oplab
