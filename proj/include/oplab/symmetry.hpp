#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "oplab/decomp.hpp"

namespace oplab {

/// Antilinear involution x -> J conj(x), with J symmetric unitary.
class Conjugation {
public:
    /// Validates the symmetric-unitary invariants; raises InvalidConjugation.
    explicit Conjugation(ComplexMatrix j, const Tolerances& tol = {});

    const ComplexMatrix& j() const { return j_; }
    std::size_t dim() const { return j_.dim(); }

    /// The linear matrix J conj(M) J* representing C M C.
    ComplexMatrix sandwich(const ComplexMatrix& m) const;

    static Conjugation entrywise(std::size_t n) { return Conjugation(ComplexMatrix::identity(n)); }

private:
    ComplexMatrix j_;
};

/// || J conj(T) J* - T* ||_F, the defect of C T C = T*.
double conjugation_residual(const ComplexMatrix& t, const Conjugation& c);

/// || J conj(M) J* - M ||_F for M = T T* T* T, the defect of [C, M] = 0.
double conjugation_commutes_with(const ComplexMatrix& t, const Conjugation& c);

enum class ScreenOutcome { pass, refuted, not_applicable };

struct ScreenResult {
    ScreenOutcome outcome = ScreenOutcome::not_applicable;
    double margin = 0.0; // violation magnitude when refuted
};

/// Necessary condition from the eigenvector geometry of T and T*:
/// |<x_i, y_j>| must equal |<x_j, y_i>|. Applicable only for a simple
/// spectrum (relative gap > eps_gap).
ScreenResult screen_eigen_angle(const ComplexMatrix& t, const Tolerances& tol = {});

/// Necessary condition from the singular vector geometry (eigenvectors of
/// |T| and |T*|): |<v_i, w_j>| must equal |<v_j, w_i>|. Applicable only for
/// distinct singular values.
ScreenResult screen_modulus_angle(const ComplexMatrix& t, const Tolerances& tol = {});

enum class CsKind { certified_cs, certified_not_cs, inconclusive };

struct CSVerdict {
    CsKind kind = CsKind::inconclusive;
    /// certified_cs: certificate residual (<= eps_cert).
    /// certified_not_cs: screen margin (>= eps_screen).
    /// inconclusive: best residual reached by the search.
    double value = 0.0;
    std::optional<Conjugation> conjugation; // set for certified_cs
    std::string screen_id;                  // set for certified_not_cs
};

struct CsOptions {
    Tolerances tol;
    std::uint64_t seed = 0x0b5e55ed5eedULL;
    int restarts = 32;
    int iterations = 500;
    int jobs = 1;
};

/// Searches the symmetric unitaries J = Q Q^T, Q on the unitary manifold,
/// for a certificate C T C = T*. Never refutes: failure to converge yields
/// an inconclusive verdict with the best residual reached. Restart seeds are
/// derived from (seed, matrix content, restart index), so the outcome is a
/// pure function of those regardless of scheduling.
CSVerdict oracle_find_conjugation(const ComplexMatrix& t, const CsOptions& opts = {});

/// Refutation screens first, the optimization oracle otherwise.
CSVerdict classify_cs(const ComplexMatrix& t, const CsOptions& opts = {});

/// Content hash of the entry bytes; part of the restart seed derivation.
std::uint64_t matrix_hash(const ComplexMatrix& m);

/// Search loss f(Q) = ||J conj(T) J* - T*||_F^2 with J = sym(Q Q^T).
/// Exposed for the derivative check in the tests.
double cs_search_loss(const ComplexMatrix& t, const ComplexMatrix& q);

/// Euclidean gradient factor G: the derivative of the loss along the curve
/// exp(s K) Q at s = 0 equals 2 Re tr(K G) for skew-Hermitian K. The descent
/// direction used by the search is the skew-Hermitian part of G.
ComplexMatrix cs_search_gradient(const ComplexMatrix& t, const ComplexMatrix& q);

} // namespace oplab
