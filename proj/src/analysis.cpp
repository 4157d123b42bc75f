#include "oplab/analysis.hpp"

namespace oplab {

Analysis::Analysis(ComplexMatrix t, AnalysisOptions opts) : t_(std::move(t)), opts_(opts) {
    t_.require_valid("analysis");
    opts_.tol.validate();
}

const FlagWitness& Analysis::normal() {
    if (!normal_) normal_ = is_normal(t_, opts_.tol);
    return *normal_;
}

const FlagWitness& Analysis::quasinormal() {
    if (!quasinormal_) quasinormal_ = is_quasinormal(t_, opts_.tol);
    return *quasinormal_;
}

const FlagWitness& Analysis::binormal() {
    if (!binormal_) binormal_ = is_binormal(t_, opts_.tol);
    return *binormal_;
}

const HyponormalResult& Analysis::hyponormal() {
    if (!hyponormal_) hyponormal_ = is_hyponormal(t_, opts_.tol);
    return *hyponormal_;
}

const ParanormalResult& Analysis::paranormal() {
    if (!paranormal_) paranormal_ = is_paranormal(t_, opts_.tol);
    return *paranormal_;
}

bool Analysis::centered() {
    if (!centered_) centered_ = is_centered(t_, opts_.centered_depth, opts_.tol);
    return *centered_;
}

const StructuralFlags& Analysis::structure() {
    if (!structure_) structure_ = structural_tests(t_, opts_.tol);
    return *structure_;
}

const CSVerdict& Analysis::cs() {
    if (!cs_) cs_ = classify_cs(t_, opts_.cs_options());
    return *cs_;
}

const SvdResult& Analysis::svd_parts() {
    if (!svd_) svd_ = svd(t_);
    return *svd_;
}

const PolarParts& Analysis::polar_parts() {
    if (!polar_) polar_ = polar(t_, PolarMode::canonical, opts_.tol);
    return *polar_;
}

double Analysis::sigma_max() {
    const SvdResult& dec = svd_parts();
    return dec.sigma.empty() ? 0.0 : dec.sigma[0];
}

Analysis& Analysis::squared() {
    if (!squared_) squared_ = std::make_unique<Analysis>(t_ * t_, opts_);
    return *squared_;
}

Analysis& Analysis::aluthge_transform() {
    if (!aluthge_) aluthge_ = std::make_unique<Analysis>(aluthge(t_, opts_.tol), opts_);
    return *aluthge_;
}

Analysis& Analysis::duggal_transform() {
    if (!duggal_) duggal_ = std::make_unique<Analysis>(duggal(t_, opts_.tol), opts_);
    return *duggal_;
}

Analysis::Report Analysis::report() {
    Report r;
    r.properties.normal = normal();
    r.properties.quasinormal = quasinormal();
    r.properties.binormal = binormal();
    r.properties.hyponormal = hyponormal();
    r.properties.paranormal = paranormal();
    r.properties.centered = centered();
    r.properties.centered_depth = opts_.centered_depth;
    r.properties.structure = structure();
    r.properties.subnormal = normal().value;
    r.properties.subnormal_note = "finite dimension: subnormal iff normal";
    r.properties.validate();
    r.cs = cs();
    return r;
}

} // namespace oplab
