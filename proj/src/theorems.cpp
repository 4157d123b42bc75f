#include "oplab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "oplab/parallel.hpp"

namespace oplab {

namespace {

constexpr const char* kHypothesisNotMet = "hypothesis_not_met";
constexpr const char* kCsInconclusive = "cs_inconclusive";
constexpr const char* kParanormalInconclusive = "paranormal_inconclusive";
constexpr const char* kCommutationMargin = "commutation_in_gray_zone";
constexpr const char* kSigmaNotDistinct = "singular_values_not_distinct";
constexpr const char* kSingular = "matrix_singular";

CheckResult skip(const char* reason) {
    CheckResult r;
    r.outcome = Outcome::skip;
    r.skip_reason = reason;
    return r;
}

void tally(CheckResult& r, const std::string& direction, bool ok) {
    auto& t = r.directions[direction];
    t.covered += 1;
    if (ok) t.passed += 1;
}

void fail(CheckResult& r, const std::string& what) {
    r.outcome = Outcome::fail;
    if (!r.failure.empty()) r.failure += "; ";
    r.failure += what;
}

double identity_scale(Analysis& a) {
    const double s = a.sigma_max();
    return std::max(1.0, s * s);
}

// hyponormal + certified CS must be normal
CheckResult thm_hyponormal_cs(Analysis& a) {
    if (!a.hyponormal().value) return skip(kHypothesisNotMet);
    const CSVerdict& cs = a.cs();
    if (cs.kind == CsKind::inconclusive) return skip(kCsInconclusive);
    if (cs.kind == CsKind::certified_not_cs) return skip(kHypothesisNotMet);
    CheckResult r;
    r.outcome = a.normal().value ? Outcome::pass : Outcome::fail;
    if (r.outcome == Outcome::fail)
        r.failure = "hyponormal and certified CS but not normal (witness " +
                    std::to_string(a.normal().witness) + ")";
    tally(r, "hyponormal_cs_implies_normal", r.outcome == Outcome::pass);
    return r;
}

// a normal square forces binormality and complex symmetry
CheckResult thm_square_normal(Analysis& a) {
    if (!a.squared().normal().value) return skip(kHypothesisNotMet);
    CheckResult r;
    r.outcome = Outcome::pass;
    if (!a.binormal().value) fail(r, "square normal but T not binormal");
    const CSVerdict& cs = a.cs();
    if (cs.kind == CsKind::certified_not_cs)
        fail(r, "square normal but CS refuted by " + cs.screen_id);
    else if (cs.kind == CsKind::inconclusive && r.outcome == Outcome::pass)
        return skip(kCsInconclusive);
    tally(r, "square_normal_implies_binormal_cs", r.outcome == Outcome::pass);
    return r;
}

// with a certificate in hand, binormality is commutation of C with TT*T*T
CheckResult thm_conjugation_commutation(Analysis& a) {
    const CSVerdict& cs = a.cs();
    if (cs.kind != CsKind::certified_cs) return skip(cs.kind == CsKind::inconclusive
                                                         ? kCsInconclusive
                                                         : kHypothesisNotMet);
    const Tolerances& tol = a.options().tol;
    const ComplexMatrix& t = a.matrix();
    const ComplexMatrix m = t * t.adjoint() * t.adjoint() * t;
    const double resid = conjugation_commutes_with(t, *cs.conjugation);
    const double scale = std::max(m.frobenius_norm(), 1e-300);

    bool commutes, decided = true;
    if (resid <= tol.eps_comm * scale)
        commutes = true;
    else if (resid >= tol.eps_screen * scale)
        commutes = false;
    else
        decided = false;

    const FlagWitness& bin = a.binormal();
    bool binormal_decided = bin.value || bin.witness >= tol.eps_screen;
    if (!decided || !binormal_decided) return skip(kCommutationMargin);

    CheckResult r;
    r.outcome = commutes == bin.value ? Outcome::pass : Outcome::fail;
    if (r.outcome == Outcome::fail) {
        std::ostringstream os;
        os << "commutation residual " << resid / scale << " disagrees with binormal witness "
           << bin.witness;
        r.failure = os.str();
    }
    if (commutes) tally(r, "commutation_implies_binormal", bin.value);
    if (bin.value) tally(r, "binormal_implies_commutation", commutes);
    return r;
}

// binormal T and its Duggal transform agree on complex symmetry and are
// unitarily equivalent when certified with a unitary polar factor
CheckResult thm_duggal(Analysis& a) {
    if (!a.binormal().value) return skip(kHypothesisNotMet);
    const CSVerdict& va = a.cs();
    const CSVerdict& vb = a.duggal_transform().cs();
    if (va.kind == CsKind::inconclusive || vb.kind == CsKind::inconclusive)
        return skip(kCsInconclusive);

    CheckResult r;
    r.outcome = Outcome::pass;
    if (va.kind != vb.kind)
        fail(r, std::string("CS verdicts disagree: T ") +
                    (va.kind == CsKind::certified_cs ? "certified" : "refuted") + ", Duggal " +
                    (vb.kind == CsKind::certified_cs ? "certified" : "refuted"));
    if (va.kind == CsKind::certified_cs)
        tally(r, "cs_transfers_to_duggal", vb.kind == CsKind::certified_cs);
    if (vb.kind == CsKind::certified_cs)
        tally(r, "cs_transfers_from_duggal", va.kind == CsKind::certified_cs);

    if (va.kind == CsKind::certified_cs && vb.kind == CsKind::certified_cs) {
        const PolarParts& parts = a.polar_parts();
        if (parts.u_unitary) {
            const ComplexMatrix& t = a.matrix();
            const ComplexMatrix& dug = a.duggal_transform().matrix();
            const double resid = distance(t, parts.u * dug * parts.u.adjoint());
            const double bound =
                a.options().tol.eps_cert * std::max(1.0, t.frobenius_norm());
            if (resid > bound) {
                std::ostringstream os;
                os << "unitary equivalence residual " << resid << " exceeds " << bound;
                fail(r, os.str());
            }
            tally(r, "unitary_equivalence_identity", resid <= bound);
        }
    }
    return r;
}

// binormal T with complex symmetric Aluthge transform has CS square,
// via the identity U T~ U* T~ = T^2 when U is unitary
CheckResult thm_aluthge_square(Analysis& a) {
    if (!a.binormal().value) return skip(kHypothesisNotMet);
    const CSVerdict& vt = a.aluthge_transform().cs();
    if (vt.kind == CsKind::inconclusive) return skip(kCsInconclusive);
    if (vt.kind == CsKind::certified_not_cs) return skip(kHypothesisNotMet);

    const CSVerdict& vsq = a.squared().cs();
    if (vsq.kind == CsKind::inconclusive) return skip(kCsInconclusive);

    CheckResult r;
    r.outcome = Outcome::pass;
    if (vsq.kind == CsKind::certified_not_cs)
        fail(r, "Aluthge transform certified CS but square refuted by " + vsq.screen_id);
    tally(r, "aluthge_cs_implies_square_cs", vsq.kind == CsKind::certified_cs);

    const PolarParts& parts = a.polar_parts();
    if (parts.u_unitary) {
        const ComplexMatrix& t = a.matrix();
        const ComplexMatrix& alu = a.aluthge_transform().matrix();
        const double resid =
            distance(parts.u * alu * parts.u.adjoint() * alu, t * t);
        const double bound = a.options().tol.eps_cert * identity_scale(a);
        if (resid > bound) {
            std::ostringstream os;
            os << "square factorization identity residual " << resid << " exceeds " << bound;
            fail(r, os.str());
        }
        tally(r, "square_factorization_identity", resid <= bound);
    }
    return r;
}

// Pattern permutation of a weighted-permutation matrix: pi[j] = the row
// carrying column j's single entry above the threshold; -1 when the pattern
// is not one-per-line.
std::vector<int> permutation_pattern(const ComplexMatrix& b, double entry_tol) {
    const std::size_t n = b.dim();
    std::vector<int> pi(n, -1), row_used(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        int hit = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(b(i, j)) > entry_tol) {
                if (hit >= 0) return {};
                hit = static_cast<int>(i);
            }
        }
        if (hit < 0 || row_used[hit]) return {};
        row_used[hit] = 1;
        pi[j] = hit;
    }
    return pi;
}

// binormal + certified CS + distinct singular values (and invertible, since
// a weighted permutation has no zero weights): T is a weighted permutation
// with an involutive pairing in the basis that diagonalizes T*T and TT*
// simultaneously. The pairing permutation is what the long-cycle argument
// forces to be involutive; the square itself need not be the identity
// ([[0,2],[1,0]] meets every hypothesis with square 2I).
CheckResult thm_weighted_permutation(Analysis& a) {
    if (!a.binormal().value) return skip(kHypothesisNotMet);
    const CSVerdict& cs = a.cs();
    if (cs.kind == CsKind::inconclusive) return skip(kCsInconclusive);
    if (cs.kind == CsKind::certified_not_cs) return skip(kHypothesisNotMet);
    const Tolerances& tol = a.options().tol;
    const SvdResult& dec = a.svd_parts();
    if (!values_distinct(dec.sigma, tol.eps_gap)) return skip(kSigmaNotDistinct);
    if (!comfortably_invertible(dec.sigma, tol.eps_gap)) return skip(kSingular);

    const ComplexMatrix& t = a.matrix();
    const HermEigResult basis = herm_eig(t.adjoint() * t, tol);
    const ComplexMatrix b = basis.eigenvectors.adjoint() * t * basis.eigenvectors;

    CheckResult r;
    r.outcome = Outcome::pass;
    const bool wp = structural_tests(b, tol).is_weighted_permutation;
    if (!wp) fail(r, "not a weighted permutation in the simultaneous eigenbasis");
    tally(r, "weighted_permutation_form", wp);

    if (wp) {
        const std::vector<int> pi = permutation_pattern(b, tol.eps_cert * b.max_abs());
        bool involutive = !pi.empty();
        for (std::size_t j = 0; involutive && j < pi.size(); ++j)
            involutive = pi[static_cast<std::size_t>(pi[j])] == static_cast<int>(j);
        if (!involutive) fail(r, "pairing permutation is not an involution");
        tally(r, "involutive_pairing", involutive);
    }
    // literal reading, recorded when T is a weighted permutation as given
    if (a.structure().is_weighted_permutation) {
        const std::vector<int> lit = permutation_pattern(t, tol.eps_cert * t.max_abs());
        bool involutive = !lit.empty();
        for (std::size_t j = 0; involutive && j < lit.size(); ++j)
            involutive = lit[static_cast<std::size_t>(lit[j])] == static_cast<int>(j);
        tally(r, "literal_pattern_involutive", involutive);
    }
    return r;
}

// the paranormal lemmas: among binormal operators paranormal == hyponormal;
// adding a certificate upgrades to normal; paranormal T is normal iff T^2 is
CheckResult thm_paranormal_family(Analysis& a) {
    const ParanormalResult& para = a.paranormal();
    if (para.verdict == ParanormalVerdict::inconclusive) return skip(kParanormalInconclusive);
    const bool para_yes = para.verdict == ParanormalVerdict::yes;

    CheckResult r;
    bool any = false;

    if (a.binormal().value) {
        any = true;
        const bool hypo = a.hyponormal().value;
        if (hypo) tally(r, "binormal_hyponormal_implies_paranormal", para_yes);
        if (para_yes) tally(r, "binormal_paranormal_implies_hyponormal", hypo);
        if (hypo != para_yes) {
            std::ostringstream os;
            os << "binormal instance: hyponormal=" << hypo << " paranormal=" << para_yes
               << " (defect " << para.defect << ", min eig " << a.hyponormal().min_eigenvalue
               << ")";
            fail(r, os.str());
        }

        const CSVerdict& cs = a.cs();
        if (cs.kind == CsKind::certified_cs) {
            const bool norm = a.normal().value;
            if (norm) tally(r, "binormal_cs_normal_implies_paranormal", para_yes);
            if (para_yes) tally(r, "binormal_cs_paranormal_implies_normal", norm);
            if (norm != para_yes)
                fail(r, "binormal certified-CS instance: normal and paranormal verdicts differ");
        }
    }

    if (para_yes) {
        any = true;
        const bool norm_t = a.normal().value;
        const bool norm_sq = a.squared().normal().value;
        if (norm_t) tally(r, "paranormal_normal_implies_square_normal", norm_sq);
        if (norm_sq) tally(r, "paranormal_square_normal_implies_normal", norm_t);
        if (norm_t != norm_sq)
            fail(r, "paranormal instance: normality of T and T^2 differ");
    }

    if (!any) return skip(kHypothesisNotMet);
    if (r.outcome != Outcome::fail) r.outcome = Outcome::pass;
    return r;
}

// T^2 PSD exactly when T is binormal, complex symmetric, and the polar
// factor is self-adjoint; plus the square polar factorization residuals
CheckResult thm_square_psd(Analysis& a) {
    const Tolerances& tol = a.options().tol;
    const ComplexMatrix& t = a.matrix();
    const bool psd2 = a.squared().structure().is_psd;
    const CSVerdict& cs = a.cs();
    const PolarParts& parts = a.polar_parts();

    CheckResult r;
    bool any = false;

    if (psd2) {
        any = true;
        bool ok = true;
        if (!a.binormal().value) {
            fail(r, "square PSD but T not binormal");
            ok = false;
        }
        if (cs.kind == CsKind::certified_not_cs) {
            fail(r, "square PSD but CS refuted by " + cs.screen_id);
            ok = false;
        } else if (cs.kind == CsKind::inconclusive) {
            if (r.outcome != Outcome::fail) return skip(kCsInconclusive);
        }
        bool sa;
        if (parts.u_unitary) {
            sa = parts.u_self_adjoint;
        } else {
            // canonical U is free on the kernel; require self-adjointness on
            // the range of |T| only
            const ComplexMatrix g = parts.p * (parts.u - parts.u.adjoint()) * parts.p;
            const double pn = parts.p.frobenius_norm();
            sa = g.frobenius_norm() <= tol.eps_cert * std::max(1.0, pn * pn);
        }
        if (!sa) {
            fail(r, "square PSD but polar factor not self-adjoint on the range");
            ok = false;
        }
        tally(r, "square_psd_implies_structure", ok);
    }

    if (a.binormal().value && cs.kind == CsKind::certified_cs && parts.u_unitary &&
        parts.u_self_adjoint) {
        any = true;
        tally(r, "structure_implies_square_psd", psd2);
        if (!psd2) fail(r, "binormal, certified CS, self-adjoint unitary polar factor, but square not PSD");
    }

    if (a.binormal().value && cs.kind == CsKind::certified_cs && parts.u_unitary) {
        any = true;
        const SquarePolarResiduals resid = square_polar_identity(t, tol);
        const double bound = tol.eps_cert * identity_scale(a);
        const bool ok = resid.r1 <= bound && resid.r2 <= bound && resid.r3 <= bound;
        if (!ok) {
            std::ostringstream os;
            os << "square polar identity residuals (" << resid.r1 << ", " << resid.r2 << ", "
               << resid.r3 << ") exceed " << bound;
            fail(r, os.str());
        }
        tally(r, "square_polar_identities", ok);
    }

    if (!any) return skip(kHypothesisNotMet);
    if (r.outcome != Outcome::fail) r.outcome = Outcome::pass;
    return r;
}

struct TheoremEntry {
    const char* id;
    CheckResult (*fn)(Analysis&);
};

const TheoremEntry kTheorems[] = {
    {"hyponormal_cs", thm_hyponormal_cs},
    {"square_normal", thm_square_normal},
    {"conjugation_commutation", thm_conjugation_commutation},
    {"duggal", thm_duggal},
    {"aluthge_square", thm_aluthge_square},
    {"weighted_permutation", thm_weighted_permutation},
    {"paranormal_family", thm_paranormal_family},
    {"square_psd", thm_square_psd},
};

} // namespace

const std::vector<std::string>& all_theorem_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& e : kTheorems) v.push_back(e.id);
        return v;
    }();
    return ids;
}

CheckResult run_theorem(const std::string& id, Analysis& a) {
    for (const auto& e : kTheorems)
        if (id == e.id) return e.fn(a);
    throw UnknownTheorem("unknown theorem id: " + id);
}

void TheoremResult::validate() const {
    if (passed + skipped + violations.size() != instances_run)
        throw ReportInconsistency("theorem tallies do not add up for " + theorem_id);
}

std::vector<TheoremResult> run_suite(const RandomSpec& ensemble,
                                     const std::vector<std::string>& theorem_ids,
                                     const AnalysisOptions& opts, int jobs) {
    ensemble.validate();
    std::vector<const TheoremEntry*> entries;
    for (const auto& id : theorem_ids) {
        const TheoremEntry* found = nullptr;
        for (const auto& e : kTheorems)
            if (id == e.id) found = &e;
        if (!found) throw UnknownTheorem("unknown theorem id: " + id);
        entries.push_back(found);
    }

    const std::size_t count = ensemble.count;
    std::vector<std::vector<CheckResult>> per_instance(count);

    AnalysisOptions inst_opts = opts;
    inst_opts.jobs = 1; // parallelism lives at the instance level
    parallel_for(count, jobs, [&](std::size_t i) {
        Analysis a(generate(ensemble, i), inst_opts);
        std::vector<CheckResult> results;
        results.reserve(entries.size());
        for (const auto* e : entries) results.push_back(e->fn(a));
        per_instance[i] = std::move(results);
    });

    std::vector<TheoremResult> out(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) out[k].theorem_id = entries[k]->id;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const CheckResult& c = per_instance[i][k];
            TheoremResult& agg = out[k];
            agg.instances_run += 1;
            switch (c.outcome) {
                case Outcome::pass:
                    agg.passed += 1;
                    break;
                case Outcome::skip:
                    agg.skipped += 1;
                    agg.skip_reasons[c.skip_reason] += 1;
                    break;
                case Outcome::fail:
                    agg.violations.push_back(Violation{i, generate(ensemble, i), c.failure});
                    break;
            }
            for (const auto& [dir, t] : c.directions) {
                agg.directions[dir].covered += t.covered;
                agg.directions[dir].passed += t.passed;
            }
        }
    }
    for (auto& res : out) res.validate();
    return out;
}

const std::vector<Fixture>& bundled_fixtures() {
    static const std::vector<Fixture> fixtures = {
        {"binormal_cs_square_not_binormal",
         ComplexMatrix{{-1, 0, -1}, {-1, 0, 1}, {0, 1, 0}},
         {{"binormal", "true"},
          {"cs", "certified_cs"},
          {"binormal@T2", "false"}}},
        {"square_cs_aluthge_not_cs",
         ComplexMatrix{{2, 2, -2, 0}, {0, 0, 0, -1}, {2, -2, -2, 0}, {1, 0, 1, 0}},
         {{"binormal", "true"},
          {"cs@T2", "certified_cs"},
          {"cs@aluthge", "certified_not_cs"}}},
        {"cs_emerges_in_square_and_aluthge",
         ComplexMatrix{{-2, -1, 2, 2}, {1, 0, 0, 2}, {0, -2, 2, -1}, {0, -2, -1, 0}},
         {{"binormal", "true"},
          {"cs", "certified_not_cs"},
          {"cs@T2", "certified_cs"},
          {"cs@aluthge", "certified_cs"}}},
        {"aluthge_drops_binormality",
         ComplexMatrix{{0, 1, 1}, {0, 1, -1}, {1, 0, 0}},
         {{"binormal", "true"},
          {"cs", "certified_cs"},
          {"binormal@aluthge", "false"}}},
        {"nonbinormal_aluthge_cs_square_not",
         ComplexMatrix{{-1, -1, -1}, {0, -1, -1}, {1, -1, -1}},
         {{"binormal", "false"},
          {"cs@aluthge", "certified_cs"},
          {"cs@T2", "certified_not_cs"}}},
    };
    return fixtures;
}

std::string evaluate_claim(Analysis& root, const std::string& claim) {
    std::string prop = claim;
    std::string ref = "T";
    const auto at = claim.find('@');
    if (at != std::string::npos) {
        prop = claim.substr(0, at);
        ref = claim.substr(at + 1);
    }
    Analysis* m = &root;
    if (ref == "T2")
        m = &root.squared();
    else if (ref == "aluthge")
        m = &root.aluthge_transform();
    else if (ref == "duggal")
        m = &root.duggal_transform();
    else if (ref != "T")
        throw InvalidSpec("unknown fixture claim reference: " + ref);

    if (prop == "binormal") return m->binormal().value ? "true" : "false";
    if (prop == "normal") return m->normal().value ? "true" : "false";
    if (prop == "quasinormal") return m->quasinormal().value ? "true" : "false";
    if (prop == "hyponormal") return m->hyponormal().value ? "true" : "false";
    if (prop == "centered") return m->centered() ? "true" : "false";
    if (prop == "psd") return m->structure().is_psd ? "true" : "false";
    if (prop == "involution") return m->structure().is_involution ? "true" : "false";
    if (prop == "unitary") return m->structure().is_unitary ? "true" : "false";
    if (prop == "self_adjoint") return m->structure().is_self_adjoint ? "true" : "false";
    if (prop == "weighted_permutation")
        return m->structure().is_weighted_permutation ? "true" : "false";
    if (prop == "paranormal") {
        switch (m->paranormal().verdict) {
            case ParanormalVerdict::yes: return "yes";
            case ParanormalVerdict::no: return "no";
            default: return "inconclusive";
        }
    }
    if (prop == "cs") {
        switch (m->cs().kind) {
            case CsKind::certified_cs: return "certified_cs";
            case CsKind::certified_not_cs: return "certified_not_cs";
            default: return "inconclusive";
        }
    }
    throw InvalidSpec("unknown fixture claim property: " + prop);
}

std::vector<FixtureOutcome> run_fixtures(const AnalysisOptions& opts) {
    std::vector<FixtureOutcome> out;
    for (const auto& f : bundled_fixtures()) {
        Analysis a(f.matrix, opts);
        for (const auto& claim : f.claims) {
            FixtureOutcome row;
            row.fixture = f.name;
            row.claim = claim.claim;
            row.expected = claim.expected;
            row.got = evaluate_claim(a, claim.claim);
            row.ok = row.got == row.expected;
            out.push_back(row);
        }
    }
    return out;
}

} // namespace oplab
