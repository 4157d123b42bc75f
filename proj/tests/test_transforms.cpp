#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oplab/rng.hpp"
#include "oplab/transforms.hpp"

using namespace oplab;

namespace {

ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(rng.gaussian(), rng.gaussian());
    return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    const SvdResult dec = svd(random_matrix(n, rng));
    return dec.w * dec.v.adjoint();
}

ComplexMatrix random_normal(std::size_t n, Rng& rng) {
    std::vector<cplx> lam(n);
    for (auto& l : lam) l = cplx(rng.gaussian(), rng.gaussian());
    const ComplexMatrix v = random_unitary(n, rng);
    return v * ComplexMatrix::diagonal(lam) * v.adjoint();
}

// sorted-by-argument match of two spectra, ignoring entries below the floor
bool spectra_match(std::vector<cplx> a, std::vector<cplx> b, double floor, double tol) {
    auto trim = [&](std::vector<cplx>& v) {
        v.erase(std::remove_if(v.begin(), v.end(),
                               [&](cplx z) { return std::abs(z) <= floor; }),
                v.end());
        std::sort(v.begin(), v.end(), [](cplx x, cplx y) {
            if (std::abs(std::abs(x) - std::abs(y)) > 1e-9) return std::abs(x) < std::abs(y);
            return std::arg(x) < std::arg(y);
        });
    };
    trim(a);
    trim(b);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

} // namespace

TEST_SUITE("transforms") {

TEST_CASE("polar of a unitary matrix") {
    Rng rng(11);
    const ComplexMatrix u = random_unitary(4, rng);
    for (PolarMode mode : {PolarMode::canonical, PolarMode::unitary_extension}) {
        const PolarParts parts = polar(u, mode);
        CHECK(distance(parts.u, u) < 1e-10);
        CHECK(distance(parts.p, ComplexMatrix::identity(4)) < 1e-10);
        CHECK(parts.u_unitary);
    }
}

TEST_CASE("polar of a PSD matrix") {
    Rng rng(12);
    const ComplexMatrix g = random_matrix(3, rng);
    const ComplexMatrix a = g.adjoint() * g;
    const PolarParts parts = polar(a);
    CHECK(distance(parts.p, a) < 1e-9 * std::max(1.0, a.frobenius_norm()));
    CHECK(distance(parts.u * parts.p, a) < 1e-9 * std::max(1.0, a.frobenius_norm()));
    CHECK(parts.u_self_adjoint);
}

TEST_CASE("polar of the rank-one nilpotent") {
    const ComplexMatrix t{{0, 1}, {0, 0}};
    const PolarParts parts = polar(t);
    CHECK(distance(parts.u, t) < 1e-14); // U = [[0,1],[0,0]] by hand
    CHECK(distance(parts.p, ComplexMatrix{{0, 0}, {0, 1}}) < 1e-14);
    CHECK_FALSE(parts.u_unitary);

    const PolarParts ext = polar(t, PolarMode::unitary_extension);
    CHECK(ext.u_unitary);
    CHECK(distance(ext.u * ext.p, t) < 1e-14);
}

TEST_CASE("polar P equals the PSD square root of T*T") {
    Rng rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rep % 6;
        const ComplexMatrix t = random_matrix(n, rng);
        const PolarParts parts = polar(t);
        CHECK(distance(parts.p, psd_sqrt(t.adjoint() * t)) <=
              1e-8 * std::max(1.0, t.frobenius_norm()));
        CHECK(distance(parts.u * parts.p, t) <= 1e-8 * std::max(1.0, t.frobenius_norm()));
        // U*U is a projection in canonical mode
        const ComplexMatrix g = parts.u.adjoint() * parts.u;
        CHECK(distance(g * g, g) < 1e-8);
    }
}

TEST_CASE("duggal fixed cases") {
    Rng rng(14);
    const ComplexMatrix nrm = random_normal(4, rng);
    CHECK(distance(duggal(nrm), nrm) < 1e-8 * std::max(1.0, nrm.frobenius_norm()));

    CHECK(duggal(ComplexMatrix{{0, 1}, {0, 0}}).frobenius_norm() < 1e-14);

    const ComplexMatrix u = random_unitary(3, rng);
    CHECK(distance(duggal(u), u) < 1e-10);
}

TEST_CASE("aluthge fixed cases") {
    Rng rng(15);
    const ComplexMatrix nrm = random_normal(3, rng);
    CHECK(distance(aluthge(nrm), nrm) < 1e-8 * std::max(1.0, nrm.frobenius_norm()));

    // order-two nilpotents are exactly the kernel of the transform
    CHECK(aluthge(ComplexMatrix{{0, 1}, {0, 0}}).frobenius_norm() < 1e-14);

    const ComplexMatrix t{{0, 1, 1}, {0, 1, -1}, {1, 0, 0}};
    const ComplexMatrix alu = aluthge(t);
    const double c = commutator_norm(alu.adjoint() * alu, alu * alu.adjoint());
    CHECK(c > 1e-3); // transform of this binormal matrix is not binormal
}

TEST_CASE("aluthge_iterates") {
    const ComplexMatrix nil{{0, 1}, {0, 0}};
    const auto iters = aluthge_iterates(nil, 3);
    REQUIRE(iters.size() == 3);
    for (const auto& m : iters) CHECK(m.frobenius_norm() < 1e-14);

    Rng rng(16);
    const ComplexMatrix nrm = random_normal(3, rng);
    for (const auto& m : aluthge_iterates(nrm, 4))
        CHECK(distance(m, nrm) < 1e-7 * std::max(1.0, nrm.frobenius_norm()));

    // involutions stay binormal along the whole chain
    const ComplexMatrix invol{{0, 2}, {0.5, 0}};
    for (const auto& m : aluthge_iterates(invol, 2)) {
        const double c = commutator_norm(m.adjoint() * m, m * m.adjoint());
        CHECK(c <= 1e-10 * std::max(1.0, m.frobenius_norm() * m.frobenius_norm()));
    }

    CHECK_THROWS_AS(aluthge_iterates(nil, 0), InvalidSpec);
    CHECK_THROWS_AS(aluthge_iterates(nil, 17), InvalidSpec);
}

TEST_CASE("transforms preserve the nonzero spectrum") {
    Rng rng(17);
    for (int rep = 0; rep < 120; ++rep) {
        const std::size_t n = 2 + rep % 5;
        const ComplexMatrix t = random_matrix(n, rng);
        const double floor = 1e-6 * std::max(1.0, t.frobenius_norm());
        const auto base = eigenvalues(t);
        CHECK(spectra_match(base, eigenvalues(duggal(t)), floor, 1e-6));
        CHECK(spectra_match(base, eigenvalues(aluthge(t)), floor, 1e-6));
    }
}

TEST_CASE("aluthge does not increase the Frobenius norm (unitary polar factor)") {
    Rng rng(18);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 2 + rep % 5;
        const ComplexMatrix t = random_matrix(n, rng);
        CHECK(aluthge(t).frobenius_norm() <= t.frobenius_norm() + 1e-9);
    }
}

TEST_CASE("binormality is commutation of |T| with |duggal(T)|") {
    Rng rng(19);
    int checked = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + rep % 5;
        const ComplexMatrix t = random_matrix(n, rng);
        const SvdResult dec = svd(t);
        if (!comfortably_invertible(dec.sigma, 1e-8)) continue;
        ++checked;
        const PolarParts parts = polar(t);
        REQUIRE(parts.u_unitary);
        const ComplexMatrix dug = parts.p * parts.u;
        const ComplexMatrix abs_dug = psd_sqrt(dug.adjoint() * dug);
        const double scale_bin = std::max(1e-300, (t.adjoint() * t).frobenius_norm() *
                                                      (t * t.adjoint()).frobenius_norm());
        const double scale_mod =
            std::max(1e-300, parts.p.frobenius_norm() * abs_dug.frobenius_norm());
        const double lhs = commutator_norm(t.adjoint() * t, t * t.adjoint()) / scale_bin;
        const double rhs = commutator_norm(parts.p, abs_dug) / scale_mod;
        // both sides decide identically, with a clear margin either way
        if (lhs <= 1e-10)
            CHECK(rhs <= 1e-6);
        else if (lhs >= 1e-6)
            CHECK(rhs >= 1e-10);
    }
    CHECK(checked >= 400);
}

TEST_CASE("square polar identities on fixed matrices") {
    Rng rng(20);
    const ComplexMatrix u = random_unitary(4, rng);
    const auto ru = square_polar_identity(u);
    CHECK(ru.r1 < 1e-10);
    CHECK(ru.r2 < 1e-10);
    CHECK(ru.r3 < 1e-10);

    const auto rp = square_polar_identity(ComplexMatrix{{0, 2}, {0.5, 0}});
    CHECK(rp.r1 < 1e-12);
    CHECK(rp.r2 < 1e-12);
    CHECK(rp.r3 < 1e-12);

    const auto rb = square_polar_identity(ComplexMatrix{{-1, 0, -1}, {-1, 0, 1}, {0, 1, 0}});
    CHECK(rb.r1 < 1e-12);
    CHECK(rb.r2 < 1e-12);
    CHECK(rb.r3 < 1e-12);
}

} // TEST_SUITE
