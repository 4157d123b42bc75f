#include "oplab/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oplab {

namespace {

constexpr double machine_eps = std::numeric_limits<double>::epsilon();

// Rotation angle zeroing the off-diagonal entry of the Hermitian 2x2 block
// [[a, z], [conj(z), b]]. Returns false when no rotation is needed.
// The plane rotation is [[c, -s*u], [s*conj(u), c]] with u = z/|z|.
bool hermitian_rotation(double a, double b, cplx z, double& c, double& s, cplx& u) {
    const double az = std::abs(z);
    if (az == 0.0) return false;
    u = z / az;
    const double tau = (a - b) / (2.0 * az);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = t * c;
    return true;
}

// col_p <- c*col_p + s*conj(u)*col_q ; col_q <- -s*u*col_p + c*col_q
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, double c, double s, cplx u) {
    const std::size_t n = m.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx mp = m(k, p);
        const cplx mq = m(k, q);
        m(k, p) = c * mp + s * std::conj(u) * mq;
        m(k, q) = -s * u * mp + c * mq;
    }
}

// row_p <- c*row_p + s*u*row_q ; row_q <- -s*conj(u)*row_p + c*row_q
void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, double c, double s, cplx u) {
    const std::size_t n = m.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx mp = m(p, k);
        const cplx mq = m(q, k);
        m(p, k) = c * mp + s * u * mq;
        m(q, k) = -s * std::conj(u) * mp + c * mq;
    }
}

double off_diagonal_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

} // namespace

double rank_tolerance(double sigma_max, std::size_t n) {
    return sigma_max * static_cast<double>(n) * machine_eps * 32.0;
}

HermEigResult herm_eig(const ComplexMatrix& a, const Tolerances& tol) {
    a.require_valid("herm_eig");
    const std::size_t n = a.dim();
    const double fro = a.frobenius_norm();
    if (distance(a, a.adjoint()) > tol.eps_comm * std::max(fro, 1e-300))
        throw NotHermitian("herm_eig: input is not Hermitian within tolerance");

    // Work on the symmetrized copy; rotations keep it Hermitian.
    ComplexMatrix h = (a + a.adjoint()) * cplx(0.5, 0.0);
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double conv = 64.0 * machine_eps * std::max(fro, 1e-300);
    const int max_sweeps = 64;
    int sweep = 0;
    while (off_diagonal_norm(h) > conv) {
        if (++sweep > max_sweeps) throw NoConvergence("herm_eig: Jacobi sweeps did not converge", sweep);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double c, s;
                cplx u;
                if (!hermitian_rotation(h(p, p).real(), h(q, q).real(), h(p, q), c, s, u)) continue;
                rotate_columns(h, p, q, c, s, u);
                rotate_rows(h, p, q, c, s, u);
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                rotate_columns(v, p, q, c, s, u);
            }
        }
    }

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = h(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lam[x] < lam[y]; });

    HermEigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

SvdResult svd(const ComplexMatrix& t) {
    t.require_valid("svd");
    const std::size_t n = t.dim();
    ComplexMatrix g = t;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double fro = t.frobenius_norm();
    SvdResult out;
    out.sigma.assign(n, 0.0);
    if (fro == 0.0) {
        out.w = ComplexMatrix::identity(n);
        out.v = v;
        return out;
    }

    const int max_sweeps = 64;
    const double rel_tol = 16.0 * machine_eps;
    const double dead = fro * fro * machine_eps * machine_eps;
    for (int sweep = 0;; ++sweep) {
        if (sweep >= max_sweeps) throw NoConvergence("svd: one-sided Jacobi did not converge", sweep);
        double worst = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                double a = 0.0, b = 0.0;
                cplx h(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) {
                    a += std::norm(g(k, i));
                    b += std::norm(g(k, j));
                    h += std::conj(g(k, i)) * g(k, j);
                }
                const double ab = std::sqrt(a * b);
                if (ab <= dead) continue;
                const double rel = std::abs(h) / ab;
                worst = std::max(worst, rel);
                if (rel <= rel_tol) continue;
                double c, s;
                cplx u;
                if (!hermitian_rotation(a, b, h, c, s, u)) continue;
                rotate_columns(g, i, j, c, s, u);
                rotate_columns(v, i, j, c, s, u);
            }
        }
        if (worst <= rel_tol) break;
    }

    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::norm(g(k, j));
        out.sigma[j] = std::sqrt(s);
    }

    // descending order, carrying columns of G and V along
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t imax = i;
        for (std::size_t k = i + 1; k < n; ++k)
            if (out.sigma[k] > out.sigma[imax]) imax = k;
        if (imax != i) {
            std::swap(out.sigma[i], out.sigma[imax]);
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(g(k, i), g(k, imax));
                std::swap(v(k, i), v(k, imax));
            }
        }
    }

    const double rtol = rank_tolerance(out.sigma.empty() ? 0.0 : out.sigma[0], n);
    ComplexMatrix w(n);
    std::vector<std::size_t> deficient;
    for (std::size_t j = 0; j < n; ++j) {
        if (out.sigma[j] > rtol) {
            for (std::size_t k = 0; k < n; ++k) w(k, j) = g(k, j) / out.sigma[j];
        } else {
            out.sigma[j] = 0.0;
            deficient.push_back(j);
        }
    }
    // complete W to a unitary basis on the deficient columns
    for (std::size_t j : deficient) {
        for (std::size_t cand = 0; cand < n; ++cand) {
            std::vector<cplx> e(n, 0.0);
            e[cand] = 1.0;
            for (std::size_t m = 0; m < n; ++m) {
                if (out.sigma[m] == 0.0 && m >= j) continue; // not yet filled
                cplx proj(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) proj += std::conj(w(k, m)) * e[k];
                for (std::size_t k = 0; k < n; ++k) e[k] -= proj * w(k, m);
            }
            const double nrm = vector_norm(e);
            if (nrm > 0.5) {
                for (std::size_t k = 0; k < n; ++k) w(k, j) = e[k] / nrm;
                break;
            }
        }
    }

    out.w = std::move(w);
    out.v = std::move(v);
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, const Tolerances& tol) {
    const HermEigResult eig = herm_eig(a, tol);
    const std::size_t n = a.dim();
    const double scale = a.frobenius_norm();
    std::vector<double> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = eig.eigenvalues[i];
        if (lam < -tol.eps_psd * std::max(scale, 1e-300))
            throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(lam) + " below PSD slack");
        if (lam < 0.0) lam = 0.0;
        roots[i] = std::sqrt(lam);
    }
    const ComplexMatrix& v = eig.eigenvectors;
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx sum(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) sum += v(i, k) * roots[k] * std::conj(v(j, k));
            r(i, j) = sum;
            r(j, i) = std::conj(sum); // exact Hermitian symmetry by construction
        }
        r(i, i) = r(i, i).real();
    }
    return r;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("commutator_norm: dimensions differ");
    return distance(a * b, b * a);
}

StructuralFlags structural_tests(const ComplexMatrix& a, const Tolerances& tol) {
    a.require_valid("structural_tests");
    const std::size_t n = a.dim();
    const double fro = a.frobenius_norm();
    StructuralFlags f;

    f.is_self_adjoint = distance(a, a.adjoint()) <= tol.eps_comm * std::max(1.0, fro);

    const ComplexMatrix gram = a.adjoint() * a;
    f.is_unitary = distance(gram, ComplexMatrix::identity(n)) <= tol.eps_cert * std::max(1.0, fro * fro);

    f.is_involution = distance(a * a, ComplexMatrix::identity(n)) <= tol.eps_cert * std::max(1.0, fro * fro);

    if (f.is_self_adjoint) {
        const HermEigResult eig = herm_eig((a + a.adjoint()) * cplx(0.5, 0.0), tol);
        f.is_psd = eig.eigenvalues.front() >= -tol.eps_psd * std::max(1.0, fro);
    }

    const double entry_tol = tol.eps_cert * a.max_abs();
    bool wp = a.max_abs() > 0.0;
    for (std::size_t i = 0; i < n && wp; ++i) {
        std::size_t row_hits = 0, col_hits = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(a(i, j)) > entry_tol) ++row_hits;
            if (std::abs(a(j, i)) > entry_tol) ++col_hits;
        }
        wp = row_hits == 1 && col_hits == 1;
    }
    f.is_weighted_permutation = wp;
    return f;
}

namespace {

// Givens pair eliminating g in (f, g); rows transform as
// [c, s; -conj(s), c] with c real.
void givens(cplx f, cplx g, double& c, cplx& s) {
    const double af = std::abs(f);
    const double ag = std::abs(g);
    const double d = std::hypot(af, ag);
    if (ag == 0.0 || d == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    c = af / d;
    const cplx sgn = af == 0.0 ? cplx(1.0, 0.0) : f / af;
    s = sgn * std::conj(g) / d;
}

void apply_givens_left(ComplexMatrix& m, std::size_t k, double c, cplx s, std::size_t from_col) {
    const std::size_t n = m.dim();
    for (std::size_t j = from_col; j < n; ++j) {
        const cplx x = m(k, j);
        const cplx y = m(k + 1, j);
        m(k, j) = c * x + s * y;
        m(k + 1, j) = -std::conj(s) * x + c * y;
    }
}

void apply_givens_right(ComplexMatrix& m, std::size_t k, double c, cplx s, std::size_t upto_row) {
    for (std::size_t i = 0; i < upto_row; ++i) {
        const cplx x = m(i, k);
        const cplx y = m(i, k + 1);
        m(i, k) = c * x + std::conj(s) * y;
        m(i, k + 1) = -s * x + c * y;
    }
}

} // namespace

SchurResult schur(const ComplexMatrix& a) {
    a.require_valid("schur");
    const std::size_t n = a.dim();
    ComplexMatrix h = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    const double fro = std::max(a.frobenius_norm(), 1e-300);

    // Householder reduction to upper Hessenberg form.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        std::vector<cplx> x(n - k - 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = h(k + 1 + i, k);
        const double xnorm = vector_norm(x);
        if (xnorm <= machine_eps * fro) continue;
        const cplx phase = std::abs(x[0]) == 0.0 ? cplx(1.0, 0.0) : x[0] / std::abs(x[0]);
        x[0] += phase * xnorm;
        const double vnorm = vector_norm(x);
        if (vnorm == 0.0) continue;
        for (auto& xi : x) xi /= vnorm;
        // H <- P H, rows k+1..n-1
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot(0.0, 0.0);
            for (std::size_t i = 0; i < x.size(); ++i) dot += std::conj(x[i]) * h(k + 1 + i, j);
            dot *= 2.0;
            for (std::size_t i = 0; i < x.size(); ++i) h(k + 1 + i, j) -= dot * x[i];
        }
        // H <- H P, cols k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot(0.0, 0.0);
            for (std::size_t j = 0; j < x.size(); ++j) dot += h(i, k + 1 + j) * x[j];
            dot *= 2.0;
            for (std::size_t j = 0; j < x.size(); ++j) h(i, k + 1 + j) -= dot * std::conj(x[j]);
        }
        // Q <- Q P
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot(0.0, 0.0);
            for (std::size_t j = 0; j < x.size(); ++j) dot += q(i, k + 1 + j) * x[j];
            dot *= 2.0;
            for (std::size_t j = 0; j < x.size(); ++j) q(i, k + 1 + j) -= dot * std::conj(x[j]);
        }
    }

    // Shifted QR on the Hessenberg form.
    const int max_total_iters = 60 * static_cast<int>(n) + 60;
    int iters = 0;
    std::size_t hi = n - 1;
    while (true) {
        // deflate negligible subdiagonals
        for (std::size_t m = 1; m <= hi; ++m) {
            const double bound = machine_eps * (std::abs(h(m - 1, m - 1)) + std::abs(h(m, m)));
            if (std::abs(h(m, m - 1)) <= std::max(bound, machine_eps * fro * 1e-2)) h(m, m - 1) = 0.0;
        }
        while (hi > 0 && h(hi, hi - 1) == cplx(0.0, 0.0)) --hi;
        if (hi == 0) break;
        std::size_t lo = hi;
        while (lo > 0 && h(lo, lo - 1) != cplx(0.0, 0.0)) --lo;

        if (++iters > max_total_iters) throw NoConvergence("schur: QR iteration did not converge", iters);

        // Wilkinson shift from the trailing 2x2 of the active window; an
        // occasional exceptional shift breaks symmetric stagnation (cyclic
        // permutation matrices being the classic case).
        const cplx aa = h(hi - 1, hi - 1), bb = h(hi - 1, hi), cc = h(hi, hi - 1), dd = h(hi, hi);
        cplx mu = dd;
        if (iters % 16 == 0) {
            mu = dd + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            const cplx delta = (aa - dd) * 0.5;
            const cplx rad = std::sqrt(delta * delta + bb * cc);
            const cplx den = std::abs(delta + rad) >= std::abs(delta - rad) ? delta + rad : delta - rad;
            if (std::abs(den) > 0.0) mu = dd - (bb * cc) / den;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        // QR factor the window with Givens rotations, then multiply back.
        std::vector<double> cs(hi);
        std::vector<cplx> sn(hi);
        for (std::size_t k = lo; k < hi; ++k) {
            givens(h(k, k), h(k + 1, k), cs[k], sn[k]);
            apply_givens_left(h, k, cs[k], sn[k], k);
            h(k + 1, k) = 0.0;
        }
        for (std::size_t k = lo; k < hi; ++k) {
            apply_givens_right(h, k, cs[k], sn[k], std::min(k + 3, n));
            apply_givens_right(q, k, cs[k], sn[k], n);
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }

    // clean below-diagonal noise
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 <= i && j < n; ++j) h(i, j) = 0.0;

    return SchurResult{std::move(q), std::move(h)};
}

std::vector<cplx> eigenvalues(const ComplexMatrix& a) {
    const SchurResult sch = schur(a);
    std::vector<cplx> vals(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) vals[i] = sch.s(i, i);
    return vals;
}

EigenPairs eigen_pairs(const ComplexMatrix& a, const Tolerances&) {
    const SchurResult sch = schur(a);
    const std::size_t n = a.dim();
    const double scale = std::max(sch.s.frobenius_norm(), 1e-300);

    EigenPairs out;
    out.values.resize(n);
    out.right = ComplexMatrix(n);
    out.adjoint_vecs = ComplexMatrix(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = sch.s(i, i);

    for (std::size_t i = 0; i < n; ++i) {
        const cplx lam = out.values[i];
        // right eigenvector: back-substitution on (S - lam)
        std::vector<cplx> u(n, 0.0);
        u[i] = 1.0;
        for (std::size_t kk = i; kk-- > 0;) {
            cplx acc(0.0, 0.0);
            for (std::size_t m = kk + 1; m <= i; ++m) acc += sch.s(kk, m) * u[m];
            cplx den = sch.s(kk, kk) - lam;
            if (std::abs(den) < machine_eps * scale) den = machine_eps * scale;
            u[kk] = -acc / den;
        }
        std::vector<cplx> x = sch.q.apply(u);
        double nx = vector_norm(x);
        for (auto& e : x) e /= nx;
        for (std::size_t k = 0; k < n; ++k) out.right(k, i) = x[k];

        // eigenvector of A* for conj(lam): forward substitution on (S* - conj(lam))
        std::vector<cplx> w(n, 0.0);
        w[i] = 1.0;
        for (std::size_t kk = i + 1; kk < n; ++kk) {
            cplx acc(0.0, 0.0);
            for (std::size_t m = i; m < kk; ++m) acc += std::conj(sch.s(m, kk)) * w[m];
            cplx den = std::conj(sch.s(kk, kk)) - std::conj(lam);
            if (std::abs(den) < machine_eps * scale) den = machine_eps * scale;
            w[kk] = -acc / den;
        }
        std::vector<cplx> y = sch.q.apply(w);
        double ny = vector_norm(y);
        for (auto& e : y) e /= ny;
        for (std::size_t k = 0; k < n; ++k) out.adjoint_vecs(k, i) = y[k];
    }
    return out;
}

bool values_distinct(const std::vector<cplx>& vals, double eps_gap) {
    const std::size_t n = vals.size();
    if (n <= 1) return true;
    double spread = 0.0, min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::abs(vals[i] - vals[j]);
            spread = std::max(spread, d);
            min_gap = std::min(min_gap, d);
        }
    return spread > 0.0 && min_gap > eps_gap * spread;
}

bool values_distinct(const std::vector<double>& vals, double eps_gap) {
    std::vector<cplx> c(vals.begin(), vals.end());
    return values_distinct(c, eps_gap);
}

} // namespace oplab
