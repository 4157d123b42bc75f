#include "doctest.h"

#include "oplab/theorems.hpp"

using namespace oplab;

namespace {

AnalysisOptions default_opts() {
    AnalysisOptions o;
    o.seed = 20240; // fixed for reproducibility
    return o;
}

CheckResult check_on(const std::string& id, const ComplexMatrix& t) {
    Analysis a(t, default_opts());
    return run_theorem(id, a);
}

const ComplexMatrix kF1{{-1, 0, -1}, {-1, 0, 1}, {0, 1, 0}};
const ComplexMatrix kUpShift{{0, 1}, {0, 0}};
const ComplexMatrix kInvolution{{0, 2}, {0.5, 0}};

} // namespace

TEST_SUITE("theorems") {

TEST_CASE("theorem table") {
    CHECK(all_theorem_ids().size() == 8);
    Analysis a(kInvolution, default_opts());
    CHECK_THROWS_AS(run_theorem("nonsense", a), UnknownTheorem);
}

TEST_CASE("hyponormal_cs") {
    // normal: hypothesis and conclusion both hold
    CHECK(check_on("hyponormal_cs", ComplexMatrix{{cplx(1, 1), 0}, {0, 2}}).outcome ==
          Outcome::pass);
    // not hyponormal: hypothesis fails
    CHECK(check_on("hyponormal_cs", kUpShift).outcome == Outcome::skip);
}

TEST_CASE("square_normal") {
    // T^2 = I for the weighted involution
    const CheckResult invol = check_on("square_normal", kInvolution);
    CHECK(invol.outcome == Outcome::pass);
    // T^2 = 0 normal; T binormal and CS by the oracle
    CHECK(check_on("square_normal", kUpShift).outcome == Outcome::pass);
    // F1 squared is not normal, hypothesis fails
    CHECK(check_on("square_normal", kF1).outcome == Outcome::skip);
}

TEST_CASE("conjugation_commutation") {
    const CheckResult sym = check_on("conjugation_commutation", ComplexMatrix{{1, 0}, {0, 2}});
    CHECK(sym.outcome == Outcome::pass);
    CHECK(check_on("conjugation_commutation", kF1).outcome == Outcome::pass);
    // refuted CS: no certificate to test with
    const ComplexMatrix notcs{{-2, -1, 2, 2}, {1, 0, 0, 2}, {0, -2, 2, -1}, {0, -2, -1, 0}};
    CHECK(check_on("conjugation_commutation", notcs).outcome == Outcome::skip);
}

TEST_CASE("duggal") {
    Analysis unitary(ComplexMatrix{{0, 1}, {1, 0}}, default_opts());
    CHECK(run_theorem("duggal", unitary).outcome == Outcome::pass);
    CHECK(check_on("duggal", kF1).outcome == Outcome::pass);
    // not binormal: skipped
    const ComplexMatrix f5{{-1, -1, -1}, {0, -1, -1}, {1, -1, -1}};
    CHECK(check_on("duggal", f5).outcome == Outcome::skip);
}

TEST_CASE("aluthge_square") {
    CHECK(check_on("aluthge_square", ComplexMatrix{{cplx(0, 2), 0}, {0, 1}}).outcome ==
          Outcome::pass);
    CHECK(check_on("aluthge_square", kInvolution).outcome == Outcome::pass);
    // binormal with CS square but refuted transform: hypothesis fails
    const ComplexMatrix f2{{2, 2, -2, 0}, {0, 0, 0, -1}, {2, -2, -2, 0}, {1, 0, 1, 0}};
    CHECK(check_on("aluthge_square", f2).outcome == Outcome::skip);
}

TEST_CASE("weighted_permutation") {
    const CheckResult wp = check_on("weighted_permutation", kInvolution);
    CHECK(wp.outcome == Outcome::pass);

    // 3x3: a weighted 2-cycle with weights (3, 1/3) plus a fixed point -1
    const ComplexMatrix wp3{{0, 3, 0}, {cplx(1, 0) / 3.0, 0, 0}, {0, 0, -1}};
    CHECK(check_on("weighted_permutation", wp3).outcome == Outcome::pass);

    // rotated copy: hypotheses are unitarily invariant
    const double c = std::cos(0.7), s = std::sin(0.7);
    const ComplexMatrix u{{c, -s, 0}, {s, c, 0}, {0, 0, 1}};
    const CheckResult rotated = check_on("weighted_permutation", u * wp3 * u.adjoint());
    CHECK(rotated.outcome == Outcome::pass);

    // singular values {1, 0} are distinct but the matrix is singular: skip
    const CheckResult nil = check_on("weighted_permutation", kUpShift);
    CHECK(nil.outcome == Outcome::skip);
    CHECK(nil.skip_reason == "matrix_singular");
}

TEST_CASE("paranormal_family") {
    CHECK(check_on("paranormal_family", ComplexMatrix{{cplx(2, 1), 0}, {0, 1}}).outcome ==
          Outcome::pass);
    // binormal, not hyponormal, not paranormal: the lemma's no/no case
    const CheckResult shift = check_on("paranormal_family", kUpShift);
    CHECK(shift.outcome == Outcome::pass);
    CHECK(shift.directions.empty()); // both sides vacuous, nothing asserted
    // weighted involution: T^2 = I normal; consistency of (c)
    CHECK(check_on("paranormal_family", kInvolution).outcome == Outcome::pass);
}

TEST_CASE("square_psd") {
    // PSD T: square PSD, U self-adjoint
    const CheckResult psd = check_on("square_psd", ComplexMatrix{{2, 1}, {1, 2}});
    CHECK(psd.outcome == Outcome::pass);
    // symmetric involution: T^2 = I PSD, U = T self-adjoint
    CHECK(check_on("square_psd", ComplexMatrix{{0, 1}, {1, 0}}).outcome == Outcome::pass);
    // i * flip: square is -I, not PSD; backward hypothesis fails too
    const ComplexMatrix iflip{{0, cplx(0, 1)}, {cplx(0, 1), 0}};
    const CheckResult r = check_on("square_psd", iflip);
    CHECK(r.outcome != Outcome::fail);
}

TEST_CASE("run_suite over involutions is violation-free") {
    const RandomSpec spec = make_spec("involution", 3, 2, 909, 100);
    const auto results = run_suite(spec, all_theorem_ids(), default_opts(), 1);
    REQUIRE(results.size() == all_theorem_ids().size());
    for (const auto& r : results) {
        CHECK(r.instances_run == 100);
        CHECK(r.violations.empty());
        r.validate();
    }
}

TEST_CASE("run_suite is deterministic and jobs-independent") {
    const RandomSpec spec = make_spec("integer_dense", 3, 2, 4321, 60);
    const auto serial = run_suite(spec, {"square_normal", "paranormal_family"}, default_opts(), 1);
    const auto parallel = run_suite(spec, {"square_normal", "paranormal_family"}, default_opts(), 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        CHECK(serial[k].passed == parallel[k].passed);
        CHECK(serial[k].skipped == parallel[k].skipped);
        CHECK(serial[k].violations.size() == parallel[k].violations.size());
        CHECK(serial[k].skip_reasons == parallel[k].skip_reasons);
    }
}

TEST_CASE("violations re-verify from the stored matrix") {
    // trip a deliberate failure by checking a theorem against a wrong
    // tolerance regime is not possible without faking data, so assert the
    // bookkeeping instead: stored matrices regenerate bit-identically
    const RandomSpec spec = make_spec("gaussian_dense", 3, 2, 5555, 40);
    for (std::size_t i = 0; i < 40; ++i) CHECK(generate(spec, i) == generate(spec, i));
}

TEST_CASE("fixture table matches the bundled claims") {
    const auto rows = run_fixtures(default_opts());
    std::size_t mismatches = 0;
    for (const auto& row : rows)
        if (!row.ok) ++mismatches;
    // the aluthge claim of the third fixture is refuted by the modulus
    // condition (4-cycle singular vector pairing); everything else holds
    CHECK(mismatches == 1);
    for (const auto& row : rows) {
        if (!row.ok) {
            CHECK(row.fixture == "cs_emerges_in_square_and_aluthge");
            CHECK(row.claim == "cs@aluthge");
            CHECK(row.got == "certified_not_cs");
        }
    }
}

} // TEST_SUITE
