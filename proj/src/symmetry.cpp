#include "oplab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "oplab/parallel.hpp"
#include "oplab/rng.hpp"

namespace oplab {

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& m) {
    return (m + m.transpose()) * cplx(0.5, 0.0);
}

} // namespace

Conjugation::Conjugation(ComplexMatrix j, const Tolerances& tol) : j_(std::move(j)) {
    j_.require_valid("conjugation");
    const std::size_t n = j_.dim();
    const double scale = std::sqrt(static_cast<double>(n));
    if (distance(j_, j_.transpose()) > tol.eps_cert * scale)
        throw InvalidConjugation("conjugation matrix is not symmetric");
    if (distance(j_ * j_.adjoint(), ComplexMatrix::identity(n)) > tol.eps_cert * scale)
        throw InvalidConjugation("conjugation matrix is not unitary");
}

ComplexMatrix Conjugation::sandwich(const ComplexMatrix& m) const {
    if (m.dim() != j_.dim()) throw DimensionMismatch("conjugation and matrix dimensions differ");
    return j_ * m.conjugate() * j_.adjoint();
}

double conjugation_residual(const ComplexMatrix& t, const Conjugation& c) {
    return distance(c.sandwich(t), t.adjoint());
}

double conjugation_commutes_with(const ComplexMatrix& t, const Conjugation& c) {
    const ComplexMatrix m = t * t.adjoint() * t.adjoint() * t;
    return distance(c.sandwich(m), m);
}

namespace {

ScreenResult angle_screen(const ComplexMatrix& lhs_vecs, const ComplexMatrix& rhs_vecs,
                          const Tolerances& tol) {
    const std::size_t n = lhs_vecs.dim();
    // gram(i, j) = <lhs_i, rhs_j>
    ComplexMatrix gram(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) s += lhs_vecs(k, i) * std::conj(rhs_vecs(k, j));
            gram(i, j) = s;
        }
    double margin = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            margin = std::max(margin, std::abs(std::abs(gram(i, j)) - std::abs(gram(j, i))));
    ScreenResult r;
    r.margin = margin;
    r.outcome = margin >= tol.eps_screen ? ScreenOutcome::refuted : ScreenOutcome::pass;
    return r;
}

} // namespace

ScreenResult screen_eigen_angle(const ComplexMatrix& t, const Tolerances& tol) {
    const EigenPairs pairs = eigen_pairs(t, tol);
    if (!values_distinct(pairs.values, tol.eps_gap)) return ScreenResult{};
    return angle_screen(pairs.right, pairs.adjoint_vecs, tol);
}

ScreenResult screen_modulus_angle(const ComplexMatrix& t, const Tolerances& tol) {
    const SvdResult dec = svd(t);
    if (!values_distinct(dec.sigma, tol.eps_gap)) return ScreenResult{};
    // v_i: eigenvectors of |T|; w_i: eigenvectors of |T*| with the same
    // singular value. On the range w_i = U v_i for the canonical polar
    // factor; the completed W column covers a zero singular value, whose
    // |T*|-eigenspace is still one-dimensional here.
    return angle_screen(dec.v, dec.w, tol);
}

std::uint64_t matrix_hash(const ComplexMatrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto eat = [&h](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    };
    eat(static_cast<double>(m.dim()));
    for (const auto& v : m.entries()) {
        eat(v.real());
        eat(v.imag());
    }
    return h;
}

namespace {

// exp of a skew-Hermitian matrix by scaling-and-squaring Taylor; the result
// is unitary to machine precision for the small steps the optimizer takes.
ComplexMatrix exp_skew(const ComplexMatrix& k) {
    const std::size_t n = k.dim();
    double norm = k.frobenius_norm();
    int squarings = 0;
    ComplexMatrix m = k;
    while (norm > 0.25 && squarings < 40) {
        m = m * cplx(0.5, 0.0);
        norm *= 0.5;
        ++squarings;
    }
    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int i = 1; i <= 12; ++i) {
        term = term * m * cplx(1.0 / i, 0.0);
        result = result + term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    // modified Gram-Schmidt on a complex Gaussian sample
    ComplexMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = cplx(rng.gaussian(), rng.gaussian());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < j; ++m) {
            cplx proj(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) proj += std::conj(g(k, m)) * g(k, j);
            for (std::size_t k = 0; k < n; ++k) g(k, j) -= proj * g(k, m);
        }
        double nrm = 0.0;
        for (std::size_t k = 0; k < n; ++k) nrm += std::norm(g(k, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {
            for (std::size_t k = 0; k < n; ++k) g(k, j) = (k == j) ? 1.0 : 0.0;
            nrm = 1.0;
        }
        for (std::size_t k = 0; k < n; ++k) g(k, j) /= nrm;
    }
    return g;
}

struct RestartOutcome {
    double residual = std::numeric_limits<double>::infinity();
    ComplexMatrix j;
};

} // namespace

double cs_search_loss(const ComplexMatrix& t, const ComplexMatrix& q) {
    const ComplexMatrix j = symmetrized(q * q.transpose());
    const ComplexMatrix r = j * t.conjugate() * j.adjoint() - t.adjoint();
    double f = 0.0;
    for (const auto& e : r.entries()) f += std::norm(e);
    return f;
}

ComplexMatrix cs_search_gradient(const ComplexMatrix& t, const ComplexMatrix& q) {
    const ComplexMatrix s = t.conjugate();
    const ComplexMatrix j = symmetrized(q * q.transpose());
    const ComplexMatrix r = j * s * j.adjoint() - t.adjoint();
    const ComplexMatrix radj = r.adjoint();
    const ComplexMatrix p1 = j * s * j.adjoint();
    const ComplexMatrix c0 = j.adjoint() * radj * j;
    return p1 * radj - radj * p1 - (s * c0).conjugate() + (c0 * s).conjugate();
}

namespace {

// --- linear certificate stage -------------------------------------------
//
// A valid conjugation satisfies J conj(T) = T* J, which is linear in J.
// Restricting to symmetric J, the solution set is the nullspace of a small
// operator (n(n+1)/2 unknowns); a certificate is a unitary element of that
// space. Generic inputs have a one-dimensional nullspace, where the Takagi
// polar factor of any null vector is already the certificate. Degenerate
// nullspaces are handled by alternating projection between the nullspace
// and the symmetric unitaries.

std::vector<ComplexMatrix> symmetric_basis(std::size_t n) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(n * (n + 1) / 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix b(n);
        b(i, i) = 1.0;
        basis.push_back(b);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ComplexMatrix b(n);
            b(i, j) = inv_sqrt2;
            b(j, i) = inv_sqrt2;
            basis.push_back(b);
        }
    return basis;
}

cplx frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        s += a.entries()[i] * std::conj(b.entries()[i]);
    return s;
}

// Unitary polar factor, re-symmetrized. For a symmetric argument this is the
// Takagi phase factor, itself symmetric unitary.
ComplexMatrix unitarize_symmetric(const ComplexMatrix& j0) {
    ComplexMatrix j = symmetrized(j0);
    for (int pass = 0; pass < 2; ++pass) {
        const SvdResult dec = svd(j);
        j = symmetrized(dec.w * dec.v.adjoint());
    }
    return j;
}

std::optional<ComplexMatrix> linear_certificate(const ComplexMatrix& t, const CsOptions& opts) {
    const std::size_t n = t.dim();
    const std::size_t m = n * (n + 1) / 2;
    if (m > ComplexMatrix::max_dim) return std::nullopt;

    const ComplexMatrix s = t.conjugate();
    const ComplexMatrix a = t.adjoint();
    const std::vector<ComplexMatrix> basis = symmetric_basis(n);

    std::vector<ComplexMatrix> images(m);
    for (std::size_t i = 0; i < m; ++i) images[i] = basis[i] * s - a * basis[i];

    ComplexMatrix h(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) h(i, j) = frobenius_inner(images[j], images[i]);
    h = (h + h.adjoint()) * cplx(0.5, 0.0);

    HermEigResult eig;
    try {
        eig = herm_eig(h, opts.tol);
    } catch (const Error&) {
        return std::nullopt;
    }
    const double lam_max = std::max(eig.eigenvalues.back(), 1e-300);

    std::vector<ComplexMatrix> null_dirs;
    for (std::size_t k = 0; k < m && eig.eigenvalues[k] <= 1e-12 * lam_max; ++k) {
        ComplexMatrix dir(n);
        for (std::size_t i = 0; i < m; ++i) dir = dir + basis[i] * eig.eigenvectors(i, k);
        null_dirs.push_back(symmetrized(dir));
    }
    if (null_dirs.empty()) return std::nullopt;

    const double target = opts.tol.eps_cert * 0.5;
    const std::size_t d = null_dirs.size();

    auto assemble = [&](const std::vector<cplx>& c) {
        ComplexMatrix j(n);
        for (std::size_t k = 0; k < d; ++k) j = j + null_dirs[k] * c[k];
        return j;
    };

    auto accept = [&](const ComplexMatrix& j0) -> std::optional<ComplexMatrix> {
        const ComplexMatrix j = unitarize_symmetric(j0);
        if (distance(j * s * j.adjoint(), a) <= target) return j;
        return std::nullopt;
    };

    // Antilinear polar balance: for invertible symmetric J0 in the nullspace,
    // J0 (conj(J0) J0)^{-1/2} is symmetric, unitary, and still a solution.
    auto balance = [&](const ComplexMatrix& j0) -> std::optional<ComplexMatrix> {
        const ComplexMatrix b = (j0.conjugate() * j0 + (j0.conjugate() * j0).adjoint()) * cplx(0.5, 0.0);
        HermEigResult eig;
        try {
            eig = herm_eig(b, opts.tol);
        } catch (const Error&) {
            return std::nullopt;
        }
        const double lam_top = eig.eigenvalues.back();
        if (lam_top <= 0.0 || eig.eigenvalues.front() <= 1e-10 * lam_top) return std::nullopt;
        ComplexMatrix inv_root(n);
        const ComplexMatrix& v = eig.eigenvectors;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t jj = 0; jj < n; ++jj) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k)
                    acc += v(i, k) * (1.0 / std::sqrt(eig.eigenvalues[k])) * std::conj(v(jj, k));
                inv_root(i, jj) = acc;
            }
        return accept(j0 * inv_root);
    };

    // Any unitary element of the nullspace is a certificate (the residual is
    // bounded by ||T|| times the unitarity defect), so drive
    // F(c) = J(c) J(c)* - I to zero with Levenberg-Marquardt over the
    // real/imaginary parts of the coefficients.
    auto polish = [&](std::vector<cplx> c) -> std::optional<ComplexMatrix> {
        ComplexMatrix j = assemble(c);
        const double jn = j.frobenius_norm();
        if (jn < 1e-14) return std::nullopt;
        const double want = std::sqrt(static_cast<double>(n));
        for (auto& ck : c) ck *= want / jn;
        j = assemble(c);

        const std::size_t p = 2 * d;
        double lambda = 1e-3;
        for (int iter = 0; iter < 80; ++iter) {
            const ComplexMatrix e = j * j.adjoint() - ComplexMatrix::identity(n);
            const double g = e.frobenius_norm() * e.frobenius_norm();
            if (g < 1e-24) break;

            // real Jacobian columns: dE/d Re(c_k) and dE/d Im(c_k)
            std::vector<ComplexMatrix> cols(p);
            for (std::size_t k = 0; k < d; ++k) {
                const ComplexMatrix njs = null_dirs[k] * j.adjoint();
                const ComplexMatrix jns = j * null_dirs[k].adjoint();
                cols[2 * k] = njs + jns;
                cols[2 * k + 1] = (njs - jns) * cplx(0.0, 1.0);
            }
            // normal equations in the small parameter space
            std::vector<double> jtj(p * p, 0.0), jtr(p, 0.0);
            for (std::size_t r = 0; r < p; ++r) {
                for (std::size_t q = r; q < p; ++q) {
                    const double val = frobenius_inner(cols[r], cols[q]).real();
                    jtj[r * p + q] = val;
                    jtj[q * p + r] = val;
                }
                jtr[r] = frobenius_inner(e, cols[r]).real();
            }

            bool moved = false;
            for (int attempt = 0; attempt < 12 && !moved; ++attempt) {
                std::vector<double> m = jtj;
                for (std::size_t r = 0; r < p; ++r) m[r * p + r] += lambda * (jtj[r * p + r] + 1e-12);
                // Cholesky solve m * delta = jtr
                std::vector<double> chol = m;
                bool ok = true;
                for (std::size_t r = 0; r < p && ok; ++r) {
                    for (std::size_t q = r; q < p; ++q) {
                        double acc = chol[q * p + r];
                        for (std::size_t k2 = 0; k2 < r; ++k2) acc -= chol[r * p + k2] * chol[q * p + k2];
                        if (r == q) {
                            if (acc <= 0.0) {
                                ok = false;
                                break;
                            }
                            chol[r * p + r] = std::sqrt(acc);
                        } else {
                            chol[q * p + r] = acc / chol[r * p + r];
                        }
                    }
                }
                if (!ok) {
                    lambda *= 8.0;
                    continue;
                }
                std::vector<double> delta = jtr;
                for (std::size_t r = 0; r < p; ++r) {
                    for (std::size_t k2 = 0; k2 < r; ++k2) delta[r] -= chol[r * p + k2] * delta[k2];
                    delta[r] /= chol[r * p + r];
                }
                for (std::size_t r = p; r-- > 0;) {
                    for (std::size_t k2 = r + 1; k2 < p; ++k2) delta[r] -= chol[k2 * p + r] * delta[k2];
                    delta[r] /= chol[r * p + r];
                }

                std::vector<cplx> c_try = c;
                for (std::size_t k = 0; k < d; ++k)
                    c_try[k] -= cplx(delta[2 * k], delta[2 * k + 1]);
                const ComplexMatrix j_try = assemble(c_try);
                const ComplexMatrix e_try = j_try * j_try.adjoint() - ComplexMatrix::identity(n);
                const double g_try = e_try.frobenius_norm() * e_try.frobenius_norm();
                if (g_try < g) {
                    c = c_try;
                    j = j_try;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    moved = true;
                } else {
                    lambda *= 8.0;
                }
            }
            if (!moved) break;
        }
        return accept(j);
    };

    Rng rng(mix_seed(opts.seed, matrix_hash(t) ^ 0xa11ce5ULL));
    for (std::size_t k = 0; k < d; ++k) {
        if (auto j = balance(null_dirs[k])) return j;
        if (auto j = accept(null_dirs[k])) return j;
    }
    if (d > 1) {
        for (int rep = 0; rep < 12; ++rep) {
            std::vector<cplx> c(d);
            for (auto& ck : c) ck = cplx(rng.gaussian(), rng.gaussian());
            if (auto j = balance(assemble(c))) return j;
        }
    }
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<cplx> c(d, cplx(0.0, 0.0));
        c[k] = 1.0;
        if (auto j = polish(c)) return j;
    }
    if (d > 1) {
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<cplx> c(d);
            for (auto& ck : c) ck = cplx(rng.gaussian(), rng.gaussian());
            if (auto j = polish(c)) return j;
        }
    }
    return std::nullopt;
}

// Descent on f(Q) = ||J conj(T) J* - T*||_F^2, J = Q Q^T, moving along
// exp(eta * W) Q for the skew-Hermitian steepest-descent direction W.
RestartOutcome run_restart(const ComplexMatrix& t, std::size_t restart, const CsOptions& opts) {
    const std::size_t n = t.dim();
    const ComplexMatrix s = t.conjugate();
    const ComplexMatrix a = t.adjoint();

    Rng rng(mix_seed(mix_seed(opts.seed, matrix_hash(t)), restart));
    ComplexMatrix q = restart == 0 ? ComplexMatrix::identity(n) : random_unitary(n, rng);

    const double target = 0.1 * opts.tol.eps_cert;

    auto value_of = [&](const ComplexMatrix& qq, ComplexMatrix& j_out, ComplexMatrix& r_out) {
        j_out = symmetrized(qq * qq.transpose());
        r_out = j_out * s * j_out.adjoint() - a;
        double f = 0.0;
        for (const auto& e : r_out.entries()) f += std::norm(e);
        return f;
    };

    ComplexMatrix j, r;
    double f = value_of(q, j, r);
    double eta = 0.25 / std::max(1.0, t.frobenius_norm() * t.frobenius_norm());

    for (int iter = 0; iter < opts.iterations; ++iter) {
        if (std::sqrt(f) <= target) break;

        const ComplexMatrix radj = r.adjoint();
        const ComplexMatrix p1 = j * s * j.adjoint();
        const ComplexMatrix c0 = j.adjoint() * radj * j;
        const ComplexMatrix g = p1 * radj - radj * p1 - (s * c0).conjugate() + (c0 * s).conjugate();
        const ComplexMatrix w = (g - g.adjoint()) * cplx(0.5, 0.0);
        const double wn2 = w.frobenius_norm() * w.frobenius_norm();
        if (wn2 <= 1e-30) break;

        // keep the step inside the accurate range of exp_skew
        eta = std::min(eta, 4.0 / std::sqrt(wn2));
        bool moved = false;
        while (eta > 1e-18) {
            const ComplexMatrix q_try = exp_skew(w * cplx(eta, 0.0)) * q;
            ComplexMatrix j_try, r_try;
            const double f_try = value_of(q_try, j_try, r_try);
            if (f_try <= f - 0.25 * eta * 2.0 * wn2) {
                q = q_try;
                j = j_try;
                r = r_try;
                f = f_try;
                eta *= 1.8;
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if (!moved) break;
        if (iter % 32 == 31) {
            // unitarity drifts over long products of approximate exponentials
            const SvdResult qs = svd(q);
            q = qs.w * qs.v.adjoint();
            f = value_of(q, j, r);
        }
    }

    RestartOutcome out;
    out.j = j;
    out.residual = std::sqrt(f);
    return out;
}

} // namespace

CSVerdict oracle_find_conjugation(const ComplexMatrix& t, const CsOptions& opts) {
    t.require_valid("oracle_find_conjugation");
    const int restarts = std::max(1, opts.restarts);

    std::vector<RestartOutcome> outcomes(restarts);
    std::vector<char> done(restarts, 0);

    auto certified = [&](int idx) {
        if (!done[idx] || outcomes[idx].residual > opts.tol.eps_cert) return false;
        // a certificate must satisfy the conjugation invariants too
        const ComplexMatrix& j = outcomes[idx].j;
        const double scale = std::sqrt(static_cast<double>(j.dim()));
        return distance(j, j.transpose()) <= opts.tol.eps_cert * scale &&
               distance(j * j.adjoint(), ComplexMatrix::identity(j.dim())) <=
                   opts.tol.eps_cert * scale;
    };

    auto finish = [&](int idx) {
        CSVerdict v;
        v.kind = CsKind::certified_cs;
        v.value = outcomes[idx].residual;
        v.conjugation = Conjugation(outcomes[idx].j, opts.tol);
        // re-verify the certificate independently of the optimizer state
        v.value = conjugation_residual(t, *v.conjugation);
        return v;
    };

    // the entrywise conjugation settles symmetric inputs with no search
    if (distance(t, t.transpose()) <= 0.5 * opts.tol.eps_cert) {
        CSVerdict v;
        v.kind = CsKind::certified_cs;
        v.conjugation = Conjugation(ComplexMatrix::identity(t.dim()), opts.tol);
        v.value = conjugation_residual(t, *v.conjugation);
        return v;
    }

    // linear stage: exact certificates from the nullspace of J conj(T) - T* J
    if (auto j = linear_certificate(t, opts)) {
        CSVerdict v;
        v.kind = CsKind::certified_cs;
        v.conjugation = Conjugation(*j, opts.tol);
        v.value = conjugation_residual(t, *v.conjugation);
        if (v.value <= opts.tol.eps_cert) return v;
    }

    // restart 0 starts at the identity and settles near-symmetric inputs
    // immediately; it runs alone so the cheap case stays cheap.
    outcomes[0] = run_restart(t, 0, opts);
    done[0] = 1;
    if (certified(0)) return finish(0);

    // remaining restarts run in index chunks; the first certifying index
    // wins, which no scheduling order can change.
    const int chunk = std::max(1, resolve_jobs(opts.jobs));
    for (int base = 1; base < restarts; base += chunk) {
        const int hi = std::min(restarts, base + chunk);
        parallel_for(static_cast<std::size_t>(hi - base), opts.jobs, [&](std::size_t k) {
            const int idx = base + static_cast<int>(k);
            outcomes[idx] = run_restart(t, static_cast<std::size_t>(idx), opts);
            done[idx] = 1;
        });
        for (int idx = base; idx < hi; ++idx)
            if (certified(idx)) return finish(idx);
    }

    CSVerdict v;
    v.kind = CsKind::inconclusive;
    v.value = std::numeric_limits<double>::infinity();
    for (int idx = 0; idx < restarts; ++idx) v.value = std::min(v.value, outcomes[idx].residual);
    return v;
}

CSVerdict classify_cs(const ComplexMatrix& t, const CsOptions& opts) {
    const ScreenResult eig_screen = screen_eigen_angle(t, opts.tol);
    if (eig_screen.outcome == ScreenOutcome::refuted) {
        CSVerdict v;
        v.kind = CsKind::certified_not_cs;
        v.value = eig_screen.margin;
        v.screen_id = "eigen_angle";
        return v;
    }
    const ScreenResult mod_screen = screen_modulus_angle(t, opts.tol);
    if (mod_screen.outcome == ScreenOutcome::refuted) {
        CSVerdict v;
        v.kind = CsKind::certified_not_cs;
        v.value = mod_screen.margin;
        v.screen_id = "modulus_angle";
        return v;
    }
    return oracle_find_conjugation(t, opts);
}

} // namespace oplab
