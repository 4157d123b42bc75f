#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "oplab/errors.hpp"

namespace oplab {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major, 1 <= dim <= 64.
///
/// Values are immutable in spirit: every operation returns a fresh matrix,
/// so instances can be shared freely across threads.
class ComplexMatrix {
public:
    static constexpr std::size_t max_dim = 64;

    ComplexMatrix() = default; // empty placeholder, dim() == 0

    explicit ComplexMatrix(std::size_t n);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
    static ComplexMatrix diagonal(const std::vector<cplx>& d);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    std::size_t dim() const { return n_; }
    bool empty() const { return n_ == 0; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    const std::vector<cplx>& entries() const { return a_; }
    std::vector<cplx>& entries() { return a_; }

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;

    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cplx s) const;
    ComplexMatrix operator-() const;

    std::vector<cplx> apply(const std::vector<cplx>& x) const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    /// True when every entry is finite.
    bool is_finite() const;

    /// Raises if the matrix is empty or has non-finite entries.
    void require_valid(const char* context) const;

    bool operator==(const ComplexMatrix& rhs) const = default;

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& m) { return m * s; }

/// ||A - B||_F; dimensions must match.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Frobenius norm of a vector.
double vector_norm(const std::vector<cplx>& x);

/// <x, y> = sum_i x_i * conj(y_i)  (linear in the first argument).
cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y);

} // namespace oplab
