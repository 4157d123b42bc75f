#pragma once

#include "oplab/errors.hpp"

namespace oplab {

/// Numeric thresholds shared across the library.
///
/// eps_comm   relative commutator tolerance (binormality and friends)
/// eps_psd    eigenvalue negativity slack for PSD decisions
/// eps_cert   residual bound for positive certificates
/// eps_screen refutation margin; must exceed eps_cert
/// eps_gap    relative distinctness gap for eigen/singular values
struct Tolerances {
    double eps_comm = 1e-10;
    double eps_psd = 1e-10;
    double eps_cert = 1e-8;
    double eps_screen = 1e-6;
    double eps_gap = 1e-8;

    void validate() const {
        if (eps_comm <= 0 || eps_psd <= 0 || eps_cert <= 0 || eps_screen <= 0 || eps_gap <= 0)
            throw InvalidSpec("tolerances must be strictly positive");
        if (eps_screen <= eps_cert)
            throw InvalidSpec("eps_screen must exceed eps_cert");
    }
};

} // namespace oplab
