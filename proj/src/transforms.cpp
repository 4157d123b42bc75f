#include "oplab/transforms.hpp"

#include <cmath>

namespace oplab {

namespace {

// V f(Sigma) V* with exact Hermitian symmetry.
ComplexMatrix rebuild_hermitian(const ComplexMatrix& v, const std::vector<double>& d) {
    const std::size_t n = v.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx sum(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) sum += v(i, k) * d[k] * std::conj(v(j, k));
            r(i, j) = sum;
            r(j, i) = std::conj(sum);
        }
        r(i, i) = r(i, i).real();
    }
    return r;
}

} // namespace

PolarParts polar(const ComplexMatrix& t, PolarMode mode, const Tolerances& tol) {
    const SvdResult dec = svd(t);
    const std::size_t n = t.dim();

    PolarParts parts;
    parts.p = rebuild_hermitian(dec.v, dec.sigma);

    // U = W D V* where D selects the range in canonical mode.
    ComplexMatrix wd = dec.w;
    if (mode == PolarMode::canonical) {
        for (std::size_t j = 0; j < n; ++j)
            if (dec.sigma[j] == 0.0)
                for (std::size_t i = 0; i < n; ++i) wd(i, j) = 0.0;
    }
    parts.u = wd * dec.v.adjoint();

    const ComplexMatrix gram = parts.u.adjoint() * parts.u;
    parts.u_unitary = distance(gram, ComplexMatrix::identity(n)) <= tol.eps_cert * std::sqrt(double(n));
    parts.u_self_adjoint =
        distance(parts.u, parts.u.adjoint()) <= tol.eps_cert * std::max(1.0, parts.u.frobenius_norm());
    return parts;
}

ComplexMatrix duggal(const ComplexMatrix& t, const Tolerances& tol) {
    const PolarParts parts = polar(t, PolarMode::canonical, tol);
    return parts.p * parts.u;
}

ComplexMatrix aluthge(const ComplexMatrix& t, const Tolerances& tol) {
    const SvdResult dec = svd(t);
    const std::size_t n = t.dim();
    std::vector<double> root(n);
    for (std::size_t j = 0; j < n; ++j) root[j] = std::sqrt(dec.sigma[j]);
    const ComplexMatrix half = rebuild_hermitian(dec.v, root);

    ComplexMatrix wd = dec.w;
    for (std::size_t j = 0; j < n; ++j)
        if (dec.sigma[j] == 0.0)
            for (std::size_t i = 0; i < n; ++i) wd(i, j) = 0.0;
    const ComplexMatrix u = wd * dec.v.adjoint();
    return half * u * half;
}

std::vector<ComplexMatrix> aluthge_iterates(const ComplexMatrix& t, int depth, const Tolerances& tol) {
    if (depth < 1 || depth > 16) throw InvalidSpec("aluthge_iterates: depth must be in [1, 16]");
    std::vector<ComplexMatrix> out;
    out.reserve(depth);
    ComplexMatrix cur = t;
    for (int k = 0; k < depth; ++k) {
        cur = aluthge(cur, tol);
        out.push_back(cur);
    }
    return out;
}

SquarePolarResiduals square_polar_identity(const ComplexMatrix& t, const Tolerances& tol) {
    const PolarParts parts = polar(t, PolarMode::canonical, tol);
    const ComplexMatrix t2 = t * t;
    const ComplexMatrix abs_t2 = psd_sqrt(t2.adjoint() * t2, tol);
    const ComplexMatrix dug = parts.p * parts.u;
    const ComplexMatrix abs_dug = psd_sqrt(dug.adjoint() * dug, tol);

    SquarePolarResiduals r;
    r.r1 = distance(t2, parts.u * parts.u * abs_t2);
    r.r2 = distance(abs_t2, parts.p * abs_dug);
    r.r3 = commutator_norm(parts.p, abs_dug);
    return r;
}

bool comfortably_invertible(const std::vector<double>& sigma, double eps_gap) {
    if (sigma.empty()) return false;
    double det = 1.0, top = 1.0;
    for (double s : sigma) {
        det *= s;
        top *= sigma[0];
    }
    return det > eps_gap * top;
}

} // namespace oplab
