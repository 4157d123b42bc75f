#include "oplab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oplab {

namespace {

FlagWitness commuting_pair(const ComplexMatrix& a, const ComplexMatrix& b, double eps) {
    const double scale = a.frobenius_norm() * b.frobenius_norm();
    const double c = commutator_norm(a, b);
    FlagWitness f;
    f.witness = scale > 0.0 ? c / scale : 0.0;
    f.value = c <= eps * scale || scale == 0.0;
    return f;
}

} // namespace

FlagWitness is_normal(const ComplexMatrix& t, const Tolerances& tol) {
    return commuting_pair(t, t.adjoint(), tol.eps_comm);
}

FlagWitness is_quasinormal(const ComplexMatrix& t, const Tolerances& tol) {
    return commuting_pair(t, t.adjoint() * t, tol.eps_comm);
}

FlagWitness is_binormal(const ComplexMatrix& t, const Tolerances& tol) {
    return commuting_pair(t.adjoint() * t, t * t.adjoint(), tol.eps_comm);
}

HyponormalResult is_hyponormal(const ComplexMatrix& t, const Tolerances& tol) {
    const ComplexMatrix d = t.adjoint() * t - t * t.adjoint();
    const HermEigResult eig = herm_eig(d, tol);
    HyponormalResult r;
    r.min_eigenvalue = eig.eigenvalues.front();
    r.witness_vector.resize(t.dim());
    for (std::size_t i = 0; i < t.dim(); ++i) r.witness_vector[i] = eig.eigenvectors(i, 0);
    const double scale = t.frobenius_norm();
    r.value = r.min_eigenvalue >= -tol.eps_psd * std::max(scale * scale, 1e-300);
    return r;
}

namespace {

struct GridPoint {
    double lambda;
    double min_eig;
    std::vector<cplx> vec;
};

GridPoint probe_lambda(const ComplexMatrix& q4, const ComplexMatrix& q2, double lambda,
                       const Tolerances& tol) {
    const std::size_t n = q4.dim();
    ComplexMatrix m = q4 - q2 * cplx(2.0 * lambda, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += lambda * lambda;
    const HermEigResult eig = herm_eig(m, tol);
    GridPoint g;
    g.lambda = lambda;
    g.min_eig = eig.eigenvalues.front();
    g.vec.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.vec[i] = eig.eigenvectors(i, 0);
    return g;
}

} // namespace

ParanormalResult is_paranormal(const ComplexMatrix& t, const Tolerances& tol) {
    ParanormalResult out;
    const SvdResult dec = svd(t);
    const double smax = dec.sigma.empty() ? 0.0 : dec.sigma[0];
    if (smax == 0.0) {
        out.verdict = ParanormalVerdict::yes;
        out.defect = 0.0;
        out.witness.assign(t.dim(), 0.0);
        if (!out.witness.empty()) out.witness[0] = 1.0;
        return out;
    }

    // scale-invariant: work with T / sigma_max
    const ComplexMatrix ts = t * cplx(1.0 / smax, 0.0);
    const ComplexMatrix ts2 = ts * ts;
    const ComplexMatrix q2 = ts.adjoint() * ts;       // T*T
    const ComplexMatrix q4 = ts2.adjoint() * ts2;     // T*^2 T^2

    auto defect_at = [&](const std::vector<cplx>& x) {
        const double nx = vector_norm(x);
        const std::vector<cplx> tx = ts.apply(x);
        const std::vector<cplx> t2x = ts2.apply(x);
        return vector_norm(t2x) * nx - vector_norm(tx) * vector_norm(tx);
    };

    GridPoint best;
    best.min_eig = std::numeric_limits<double>::infinity();

    // geometric grid over the full slack range, refined below where the
    // violating window can actually live (lambda = ||Tx||^2 <= 1)
    const double lo = tol.eps_gap, hi = 1.0 / tol.eps_gap;
    const int per_decade = 4;
    const int points = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1;
    for (int k = 0; k < points; ++k) {
        const double lambda = lo * std::pow(hi / lo, double(k) / double(points - 1));
        GridPoint g = probe_lambda(q4, q2, lambda, tol);
        if (g.min_eig < best.min_eig) best = g;
        if (lambda > 4.0) continue;
        // alternate: bottom eigenvector -> its optimal lambda -> repeat
        for (int it = 0; it < 8; ++it) {
            const std::vector<cplx> tx = ts.apply(g.vec);
            const double nx = vector_norm(g.vec);
            const double next = vector_norm(tx) * vector_norm(tx) / (nx * nx);
            if (next <= 0.0) break;
            GridPoint g2 = probe_lambda(q4, q2, next, tol);
            if (g2.min_eig >= g.min_eig - 1e-18) {
                g = g2;
                break;
            }
            g = g2;
        }
        if (g.min_eig < best.min_eig) best = g;
    }

    double nb = vector_norm(best.vec);
    for (auto& e : best.vec) e /= nb;
    out.witness = best.vec;
    out.defect = defect_at(best.vec);

    if (out.defect < -tol.eps_screen)
        out.verdict = ParanormalVerdict::no;
    else if (best.min_eig >= -tol.eps_cert && out.defect >= -tol.eps_cert)
        out.verdict = ParanormalVerdict::yes;
    else
        out.verdict = ParanormalVerdict::inconclusive;
    return out;
}

bool is_centered(const ComplexMatrix& t, int depth, const Tolerances& tol) {
    if (depth < 1 || depth > 8) throw InvalidSpec("is_centered: depth must be in [1, 8]");
    std::vector<ComplexMatrix> family;
    family.reserve(2 * depth);
    ComplexMatrix power = t;
    for (int k = 1; k <= depth; ++k) {
        family.push_back(power.adjoint() * power);
        family.push_back(power * power.adjoint());
        if (k < depth) power = power * t;
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const double scale = family[i].frobenius_norm() * family[j].frobenius_norm();
            if (scale == 0.0) continue;
            if (commutator_norm(family[i], family[j]) > tol.eps_comm * scale) return false;
        }
    }
    return true;
}

void PropertyReport::validate() const {
    if (normal.value && !quasinormal.value)
        throw ReportInconsistency("normal matrix not flagged quasinormal");
    if (quasinormal.value && !hyponormal.value)
        throw ReportInconsistency("quasinormal matrix not flagged hyponormal");
    if (normal.value && !binormal.value)
        throw ReportInconsistency("normal matrix not flagged binormal");
}

PropertyReport classify_properties(const ComplexMatrix& t, int centered_depth, const Tolerances& tol) {
    PropertyReport r;
    r.normal = is_normal(t, tol);
    r.quasinormal = is_quasinormal(t, tol);
    r.binormal = is_binormal(t, tol);
    r.hyponormal = is_hyponormal(t, tol);
    r.paranormal = is_paranormal(t, tol);
    r.centered_depth = centered_depth;
    r.centered = is_centered(t, centered_depth, tol);
    r.structure = structural_tests(t, tol);
    r.subnormal = r.normal.value;
    r.subnormal_note = "finite dimension: subnormal iff normal";
    r.validate();
    return r;
}

} // namespace oplab
