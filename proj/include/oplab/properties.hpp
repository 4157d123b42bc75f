#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oplab/decomp.hpp"

namespace oplab {

/// Boolean verdict plus the relative defect norm that decided it.
struct FlagWitness {
    bool value = false;
    double witness = 0.0;
};

/// T commutes with T* within eps_comm (relative to the factor norms).
FlagWitness is_normal(const ComplexMatrix& t, const Tolerances& tol = {});
/// T commutes with T*T.
FlagWitness is_quasinormal(const ComplexMatrix& t, const Tolerances& tol = {});
/// T*T commutes with TT*.
FlagWitness is_binormal(const ComplexMatrix& t, const Tolerances& tol = {});

struct HyponormalResult {
    bool value = false;
    double min_eigenvalue = 0.0;       // of T*T - TT*
    std::vector<cplx> witness_vector;  // eigenvector attaining it
};

/// T*T - TT* is PSD within eps_psd * ||T||^2.
HyponormalResult is_hyponormal(const ComplexMatrix& t, const Tolerances& tol = {});

enum class ParanormalVerdict { yes, no, inconclusive };

struct ParanormalResult {
    ParanormalVerdict verdict = ParanormalVerdict::inconclusive;
    /// Scale-invariant defect min_x (||T^2 x|| ||x|| - ||Tx||^2) / sigma_max^2
    /// at the worst point found; negative means a violation.
    double defect = 0.0;
    std::vector<cplx> witness; // unit vector attaining the defect
};

/// Decides ||Tx||^2 <= ||T^2 x|| ||x|| for all x through the PSD family
/// T*^2 T^2 - 2 lambda T*T + lambda^2 I, lambda > 0, sampled on a geometric
/// grid with local refinement. A "no" always carries a re-verifiable witness
/// vector; a "yes" means no significant negativity was found anywhere.
ParanormalResult is_paranormal(const ComplexMatrix& t, const Tolerances& tol = {});

/// Depth-truncated centered test: all pairwise commutators within
/// {(T^k)* T^k, T^k (T^k)* : 1 <= k <= depth} vanish within eps_comm.
bool is_centered(const ComplexMatrix& t, int depth, const Tolerances& tol = {});

/// Full classification of one matrix. The cs field is filled in by the
/// symmetry layer (see analysis.hpp); here it stays unset.
struct PropertyReport {
    FlagWitness normal;
    FlagWitness quasinormal;
    FlagWitness binormal;
    HyponormalResult hyponormal;
    ParanormalResult paranormal;
    bool centered = false;
    int centered_depth = 4;
    StructuralFlags structure;
    // finite-dimensional input: subnormality coincides with normality
    bool subnormal = false;
    std::string subnormal_note;

    /// Raises ReportInconsistency when the implication chain
    /// normal => quasinormal => hyponormal or normal => binormal breaks.
    void validate() const;
};

PropertyReport classify_properties(const ComplexMatrix& t, int centered_depth = 4,
                                   const Tolerances& tol = {});

} // namespace oplab
