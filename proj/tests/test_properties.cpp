#include "doctest.h"

#include <cmath>

#include "oplab/generators.hpp"
#include "oplab/properties.hpp"
#include "oplab/rng.hpp"

using namespace oplab;

TEST_SUITE("properties") {

TEST_CASE("commuting-pair checks on diagonal and bundled matrices") {
    const ComplexMatrix d{{cplx(1, 2), 0}, {0, cplx(-3, 1)}};
    CHECK(is_normal(d).value);
    CHECK(is_quasinormal(d).value);
    CHECK(is_binormal(d).value);

    const ComplexMatrix t{{-1, 0, -1}, {-1, 0, 1}, {0, 1, 0}};
    CHECK(is_binormal(t).value);
    CHECK_FALSE(is_binormal(t * t).value);
    CHECK_FALSE(is_normal(t).value);
}

TEST_CASE("hyponormal hand cases") {
    // T*T - TT* = diag(-1, 1) for the upper shift
    const auto up = is_hyponormal(ComplexMatrix{{0, 1}, {0, 0}});
    CHECK_FALSE(up.value);
    CHECK(up.min_eigenvalue == doctest::Approx(-1.0));

    const auto down = is_hyponormal(ComplexMatrix{{0, 0}, {1, 0}});
    CHECK_FALSE(down.value);
    CHECK(down.min_eigenvalue == doctest::Approx(-1.0));

    Rng rng(21);
    RandomSpec spec = make_spec("normal", 4, 2, 77, 50);
    for (std::size_t i = 0; i < 50; ++i) CHECK(is_hyponormal(generate(spec, i)).value);
}

TEST_CASE("hyponormal witness vector attains the minimum eigenvalue") {
    const ComplexMatrix t{{0, 1}, {0, 0}};
    const auto h = is_hyponormal(t);
    const ComplexMatrix d = t.adjoint() * t - t * t.adjoint();
    const std::vector<cplx> dx = d.apply(h.witness_vector);
    double quad = 0.0;
    for (std::size_t k = 0; k < dx.size(); ++k)
        quad += (dx[k] * std::conj(h.witness_vector[k])).real();
    CHECK(quad == doctest::Approx(h.min_eigenvalue).epsilon(1e-10));
}

TEST_CASE("paranormal verdicts") {
    RandomSpec nrm = make_spec("normal", 3, 2, 31, 40);
    for (std::size_t i = 0; i < 40; ++i)
        CHECK(is_paranormal(generate(nrm, i)).verdict == ParanormalVerdict::yes);

    const auto up = is_paranormal(ComplexMatrix{{0, 1}, {0, 0}});
    CHECK(up.verdict == ParanormalVerdict::no);
    CHECK(up.defect < -1e-3);
    // witness is e2: ||T^2 x|| ||x|| = 0 < 1 = ||Tx||^2
    CHECK(std::abs(up.witness[1]) == doctest::Approx(1.0));

    CHECK(is_paranormal(ComplexMatrix::zero(3)).verdict == ParanormalVerdict::yes);
}

TEST_CASE("paranormal witness re-verifies directly") {
    Rng rng(32);
    RandomSpec spec = make_spec("integer_dense", 4, 2, 99, 200);
    for (std::size_t i = 0; i < 200; ++i) {
        const ComplexMatrix t = generate(spec, i);
        const auto p = is_paranormal(t);
        if (p.verdict != ParanormalVerdict::no) continue;
        const std::vector<cplx> tx = t.apply(p.witness);
        const std::vector<cplx> t2x = (t * t).apply(p.witness);
        const double nx = vector_norm(p.witness);
        const double direct = vector_norm(t2x) * nx - vector_norm(tx) * vector_norm(tx);
        CHECK(direct < 0.0);
    }
}

TEST_CASE("centered checks") {
    CHECK(is_centered(ComplexMatrix{{0, 2}, {0.5, 0}}, 8));
    CHECK(is_centered(ComplexMatrix{{cplx(1, 1), 0}, {0, cplx(2, -1)}}, 6));

    // binormal with a non-binormal transform is not centered at small depth
    const ComplexMatrix t{{0, 1, 1}, {0, 1, -1}, {1, 0, 0}};
    CHECK(is_binormal(t).value);
    bool fails_by_4 = false;
    for (int d = 1; d <= 4 && !fails_by_4; ++d) fails_by_4 = !is_centered(t, d);
    CHECK(fails_by_4);

    CHECK_THROWS_AS(is_centered(t, 0), InvalidSpec);
    CHECK_THROWS_AS(is_centered(t, 9), InvalidSpec);
}

TEST_CASE("centered is monotone nonincreasing in depth") {
    Rng rng(43);
    RandomSpec spec = make_spec("integer_dense", 3, 2, 1234, 150);
    for (std::size_t i = 0; i < 150; ++i) {
        const ComplexMatrix t = generate(spec, i);
        bool prev = true;
        for (int d = 1; d <= 5; ++d) {
            const bool cur = is_centered(t, d);
            if (!prev) CHECK_FALSE(cur);
            prev = cur;
        }
    }
}

TEST_CASE("implication chain on random matrices") {
    RandomSpec families[] = {
        make_spec("integer_dense", 4, 2, 7, 250),
        make_spec("gaussian_dense", 3, 2, 8, 250),
        make_spec("normal", 4, 2, 9, 250),
        make_spec("square_normal", 4, 2, 10, 250),
    };
    for (const auto& spec : families) {
        for (std::size_t i = 0; i < 250; ++i) {
            const ComplexMatrix t = generate(spec, i);
            const auto n = is_normal(t);
            const auto q = is_quasinormal(t);
            const auto h = is_hyponormal(t);
            const auto b = is_binormal(t);
            if (n.value) {
                CHECK(q.value);
                CHECK(b.value);
            }
            if (q.value) CHECK(h.value);
        }
    }
}

TEST_CASE("binormality is adjoint symmetric") {
    RandomSpec spec = make_spec("integer_dense", 4, 3, 55, 300);
    for (std::size_t i = 0; i < 300; ++i) {
        const ComplexMatrix t = generate(spec, i);
        CHECK(is_binormal(t).value == is_binormal(t.adjoint()).value);
    }
}

TEST_CASE("paranormal equals hyponormal on binormal samples") {
    // binormal-by-construction families
    const char* families[] = {"involution", "weighted_involutive_permutation", "nilpotent2",
                              "normal"};
    int checked = 0;
    for (const char* fam : families) {
        RandomSpec spec = make_spec(fam, 4, 2, 1717, 125);
        for (std::size_t i = 0; i < 125; ++i) {
            const ComplexMatrix t = generate(spec, i);
            if (!is_binormal(t).value) continue;
            const auto p = is_paranormal(t);
            CHECK(p.verdict != ParanormalVerdict::inconclusive);
            CHECK((p.verdict == ParanormalVerdict::yes) == is_hyponormal(t).value);
            ++checked;
        }
    }
    CHECK(checked >= 450);
}

TEST_CASE("report validation accepts consistent classifications") {
    RandomSpec spec = make_spec("integer_dense", 3, 2, 66, 100);
    for (std::size_t i = 0; i < 100; ++i) {
        const PropertyReport r = classify_properties(generate(spec, i));
        CHECK(r.subnormal == r.normal.value);
    }
}

TEST_CASE("report validation rejects a broken chain") {
    PropertyReport r;
    r.normal.value = true;
    r.quasinormal.value = false;
    CHECK_THROWS_AS(r.validate(), ReportInconsistency);
}

} // TEST_SUITE
