#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "oplab/properties.hpp"
#include "oplab/symmetry.hpp"
#include "oplab/transforms.hpp"

namespace oplab {

struct AnalysisOptions {
    Tolerances tol;
    std::uint64_t seed = 0x0b5e55ed5eedULL;
    int restarts = 32;
    int iterations = 500;
    int centered_depth = 4;
    int jobs = 1;

    CsOptions cs_options() const {
        CsOptions o;
        o.tol = tol;
        o.seed = seed;
        o.restarts = restarts;
        o.iterations = iterations;
        o.jobs = jobs;
        return o;
    }
};

/// One matrix plus every derived quantity the checks consume, computed on
/// first use and cached. Derived matrices (square, transforms) expose their
/// own Analysis so a theorem chain never recomputes a classification.
class Analysis {
public:
    Analysis(ComplexMatrix t, AnalysisOptions opts);

    const ComplexMatrix& matrix() const { return t_; }
    const AnalysisOptions& options() const { return opts_; }

    const FlagWitness& normal();
    const FlagWitness& quasinormal();
    const FlagWitness& binormal();
    const HyponormalResult& hyponormal();
    const ParanormalResult& paranormal();
    bool centered();
    const StructuralFlags& structure();
    const CSVerdict& cs();
    const SvdResult& svd_parts();
    const PolarParts& polar_parts(); // canonical mode
    double sigma_max();

    Analysis& squared();
    Analysis& aluthge_transform();
    Analysis& duggal_transform();

    /// Full report (properties plus CS verdict).
    struct Report {
        PropertyReport properties;
        CSVerdict cs;
    };
    Report report();

private:
    ComplexMatrix t_;
    AnalysisOptions opts_;

    std::optional<FlagWitness> normal_, quasinormal_, binormal_;
    std::optional<HyponormalResult> hyponormal_;
    std::optional<ParanormalResult> paranormal_;
    std::optional<bool> centered_;
    std::optional<StructuralFlags> structure_;
    std::optional<CSVerdict> cs_;
    std::optional<SvdResult> svd_;
    std::optional<PolarParts> polar_;

    std::unique_ptr<Analysis> squared_, aluthge_, duggal_;
};

} // namespace oplab
