#pragma once

#include <vector>

#include "oplab/decomp.hpp"

namespace oplab {

enum class PolarMode {
    canonical,        // U is the partial isometry vanishing on ker|T|
    unitary_extension // U = W V*, always unitary
};

struct PolarParts {
    ComplexMatrix u;
    ComplexMatrix p; // |T|, PSD
    bool u_unitary = false;
    bool u_self_adjoint = false;
};

/// Polar decomposition T = U |T| derived from the SVD.
PolarParts polar(const ComplexMatrix& t, PolarMode mode = PolarMode::canonical,
                 const Tolerances& tol = {});

/// |T| U, from the canonical polar parts.
ComplexMatrix duggal(const ComplexMatrix& t, const Tolerances& tol = {});

/// |T|^{1/2} U |T|^{1/2}, from the canonical polar parts.
ComplexMatrix aluthge(const ComplexMatrix& t, const Tolerances& tol = {});

/// depth successive applications; depth <= 16.
std::vector<ComplexMatrix> aluthge_iterates(const ComplexMatrix& t, int depth,
                                            const Tolerances& tol = {});

struct SquarePolarResiduals {
    double r1; // || T^2 - U^2 |T^2| ||_F
    double r2; // || |T^2| - |T| |T_dug| ||_F
    double r3; // || [|T|, |T_dug|] ||_F
};

/// Residuals of the square-of-operator polar factorization identities.
/// Computed unconditionally; they are small exactly when the hypotheses
/// they encode hold for T.
SquarePolarResiduals square_polar_identity(const ComplexMatrix& t, const Tolerances& tol = {});

/// True when |det T| clears eps_gap * sigma_max^n, i.e. the canonical polar
/// factor is unitary and biconditional checks may be asserted strictly.
bool comfortably_invertible(const std::vector<double>& sigma, double eps_gap);

} // namespace oplab
