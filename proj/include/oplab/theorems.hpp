#pragma once

#include <map>
#include <string>
#include <vector>

#include "oplab/analysis.hpp"
#include "oplab/generators.hpp"

namespace oplab {

enum class Outcome { pass, fail, skip };

struct DirectionTally {
    std::size_t covered = 0; // instances where the direction's hypothesis held
    std::size_t passed = 0;
};

/// One theorem applied to one matrix. Hypothesis failures and inconclusive
/// verdicts are explicit skips, never silent passes.
struct CheckResult {
    Outcome outcome = Outcome::skip;
    std::string skip_reason; // set when outcome == skip
    std::string failure;     // set when outcome == fail
    std::map<std::string, DirectionTally> directions;
};

const std::vector<std::string>& all_theorem_ids();

/// Raises UnknownTheorem for an unrecognized id.
CheckResult run_theorem(const std::string& id, Analysis& a);

struct Violation {
    std::size_t index = 0;
    ComplexMatrix matrix;
    std::string failure;
};

struct TheoremResult {
    std::string theorem_id;
    std::size_t instances_run = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;
    std::vector<Violation> violations;
    std::map<std::string, std::size_t> skip_reasons;
    std::map<std::string, DirectionTally> directions;

    void validate() const; // passed + skipped + violations == instances_run
};

/// Applies each theorem to each generated instance. Instance seeds are
/// index-derived, instances may be checked concurrently, and the aggregate
/// is folded in index order, so the result is independent of jobs.
std::vector<TheoremResult> run_suite(const RandomSpec& ensemble,
                                     const std::vector<std::string>& theorem_ids,
                                     const AnalysisOptions& opts, int jobs = 1);

// --- bundled fixtures -------------------------------------------------------

struct FixtureClaim {
    std::string claim;    // e.g. "binormal", "cs@T2", "binormal@aluthge"
    std::string expected; // "true" / "false" / "certified_cs" / "certified_not_cs"
};

struct Fixture {
    std::string name;
    ComplexMatrix matrix;
    std::vector<FixtureClaim> claims;
};

const std::vector<Fixture>& bundled_fixtures();

/// Claim syntax "prop" or "prop@ref" with ref in {T, T2, aluthge, duggal};
/// returns "true"/"false" for boolean properties and the verdict name for cs.
std::string evaluate_claim(Analysis& a, const std::string& claim);

struct FixtureOutcome {
    std::string fixture;
    std::string claim;
    std::string expected;
    std::string got;
    bool ok = false;
};

std::vector<FixtureOutcome> run_fixtures(const AnalysisOptions& opts);

} // namespace oplab
