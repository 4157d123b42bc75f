#pragma once

#include <vector>

#include "oplab/complex_matrix.hpp"
#include "oplab/tolerances.hpp"

namespace oplab {

struct HermEigResult {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // unitary, columns paired with eigenvalues
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// A = V diag(lambda) V*. Raises NotHermitian when the input strays from
/// self-adjointness by more than eps_comm * ||A||_F.
HermEigResult herm_eig(const ComplexMatrix& a, const Tolerances& tol = {});

struct SvdResult {
    ComplexMatrix w;           // unitary (completed on the kernel)
    std::vector<double> sigma; // descending, nonnegative
    ComplexMatrix v;           // unitary
};

/// T = W diag(sigma) V* by the one-sided Jacobi method.
SvdResult svd(const ComplexMatrix& t);

/// Hermitian PSD square root via the spectral decomposition. Eigenvalues in
/// [-eps_psd * ||A||_F, 0) are clamped to zero; anything lower raises NotPsd.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, const Tolerances& tol = {});

/// ||AB - BA||_F.
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

struct StructuralFlags {
    bool is_psd = false;
    bool is_unitary = false;
    bool is_involution = false;
    bool is_self_adjoint = false;
    bool is_weighted_permutation = false;
};

/// Tolerance-based structural classification of a single matrix.
/// Weighted-permutation means exactly one entry per row and per column above
/// eps_cert * max|a_ij|.
StructuralFlags structural_tests(const ComplexMatrix& a, const Tolerances& tol = {});

struct SchurResult {
    ComplexMatrix q; // unitary
    ComplexMatrix s; // upper triangular, A = Q S Q*
};

/// Complex Schur form via Householder reduction to Hessenberg followed by
/// Wilkinson-shifted QR.
SchurResult schur(const ComplexMatrix& a);

/// Eigenvalues of a general matrix (diagonal of the Schur factor,
/// in no particular order).
std::vector<cplx> eigenvalues(const ComplexMatrix& a);

struct EigenPairs {
    std::vector<cplx> values;
    ComplexMatrix right;       // unit right eigenvectors of A (columns)
    ComplexMatrix adjoint_vecs; // unit eigenvectors of A*, column i pairs with conj(values[i])
};

/// Right eigenvectors of A and of A*, paired by eigenvalue, from one Schur
/// decomposition. Only meaningful when the spectrum is simple; callers gate
/// on spectrum_is_distinct.
EigenPairs eigen_pairs(const ComplexMatrix& a, const Tolerances& tol = {});

/// True when all pairwise gaps exceed eps_gap times the spread.
bool values_distinct(const std::vector<cplx>& vals, double eps_gap);
bool values_distinct(const std::vector<double>& vals, double eps_gap);

/// Singular values below this threshold are treated as rank deficiency.
double rank_tolerance(double sigma_max, std::size_t n);

} // namespace oplab
