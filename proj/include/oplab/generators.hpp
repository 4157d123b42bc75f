#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oplab/analysis.hpp"

namespace oplab {

enum class Family {
    integer_dense,
    gaussian_dense,
    involution,
    weighted_involutive_permutation,
    nilpotent2,
    normal,
    square_normal,
    unitary_conjugate,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Deterministic matrix ensemble: generate(spec, i) is a pure function of
/// (family, n, entry_bound, seed, i), so streams are index-addressed and
/// safe to sample from any number of threads.
struct RandomSpec {
    Family family = Family::integer_dense;
    std::size_t n = 3;
    int entry_bound = 2;
    std::uint64_t seed = 1;
    std::size_t count = 1;
    std::shared_ptr<const RandomSpec> inner; // unitary_conjugate payload

    void validate() const;
};

/// "involution", or "unitary_conjugate:involution" for wrapped families.
RandomSpec make_spec(const std::string& family_text, std::size_t n, int entry_bound,
                     std::uint64_t seed, std::size_t count);

ComplexMatrix generate(const RandomSpec& spec, std::size_t index);

// --- hunt target expressions ----------------------------------------------
//
// Grammar:  expr  := or
//           or    := and ('|' and)*
//           and   := unary ('&' unary)*
//           unary := '!' unary | '(' expr ')' | atom
//           atom  := prop ('@' ref)?
//           prop  := normal | quasinormal | binormal | hyponormal |
//                    paranormal | cs | psd | involution |
//                    weighted_permutation | centered
//           ref   := T | T2 | aluthge | duggal
//
// Atoms evaluate over the property report of the referenced matrix with
// Kleene three-valued logic: an inconclusive verdict satisfies neither
// polarity, and a match requires the whole expression to be decided true.
class TargetExpr {
public:
    static TargetExpr parse(const std::string& text); // ParseError on bad input

    /// Decided value, or nullopt when an inconclusive verdict blocks it.
    /// Cheap properties are evaluated before conjugation searches.
    std::optional<bool> evaluate(Analysis& a) const;

    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

struct HuntMatch {
    std::size_t index = 0;
    ComplexMatrix matrix;
};

struct HuntOutcome {
    std::vector<HuntMatch> matches; // ascending index order
    std::size_t samples = 0;
    bool exhausted = false; // budget consumed without a single match
};

/// Scans generate(spec, 0..budget-1) for matrices whose report satisfies the
/// target. Repeated matrix content is classified once (memoized), verdicts
/// are index-addressed, and the result is identical for any jobs setting.
HuntOutcome hunt(const TargetExpr& target, const RandomSpec& spec, std::size_t budget,
                 const AnalysisOptions& opts, int jobs = 1);

} // namespace oplab
