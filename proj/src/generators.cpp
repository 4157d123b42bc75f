#include "oplab/generators.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <unordered_map>

#include "oplab/parallel.hpp"
#include "oplab/rng.hpp"

namespace oplab {

std::string family_name(Family f) {
    switch (f) {
        case Family::integer_dense: return "integer_dense";
        case Family::gaussian_dense: return "gaussian_dense";
        case Family::involution: return "involution";
        case Family::weighted_involutive_permutation: return "weighted_involutive_permutation";
        case Family::nilpotent2: return "nilpotent2";
        case Family::normal: return "normal";
        case Family::square_normal: return "square_normal";
        case Family::unitary_conjugate: return "unitary_conjugate";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    static const std::map<std::string, Family> table = {
        {"integer_dense", Family::integer_dense},
        {"gaussian_dense", Family::gaussian_dense},
        {"involution", Family::involution},
        {"weighted_involutive_permutation", Family::weighted_involutive_permutation},
        {"nilpotent2", Family::nilpotent2},
        {"normal", Family::normal},
        {"square_normal", Family::square_normal},
        {"unitary_conjugate", Family::unitary_conjugate},
    };
    auto it = table.find(name);
    if (it == table.end()) throw UnknownGenerator("unknown generator family: " + name);
    return it->second;
}

void RandomSpec::validate() const {
    if (n < 1 || n > ComplexMatrix::max_dim) throw InvalidSpec("spec dimension out of range");
    if (entry_bound < 1) throw InvalidSpec("entry_bound must be >= 1");
    if (count < 1) throw InvalidSpec("count must be >= 1");
    if (family == Family::unitary_conjugate) {
        if (!inner) throw InvalidSpec("unitary_conjugate needs an inner family");
        inner->validate();
    }
}

RandomSpec make_spec(const std::string& family_text, std::size_t n, int entry_bound,
                     std::uint64_t seed, std::size_t count) {
    RandomSpec spec;
    spec.n = n;
    spec.entry_bound = entry_bound;
    spec.seed = seed;
    spec.count = count;
    const auto colon = family_text.find(':');
    if (colon == std::string::npos) {
        spec.family = family_from_name(family_text);
    } else {
        spec.family = family_from_name(family_text.substr(0, colon));
        if (spec.family != Family::unitary_conjugate)
            throw InvalidSpec("only unitary_conjugate takes an inner family");
        auto inner = std::make_shared<RandomSpec>(
            make_spec(family_text.substr(colon + 1), n, entry_bound, seed, count));
        spec.inner = std::move(inner);
    }
    spec.validate();
    return spec;
}

namespace {

std::uint64_t family_tag(Family f) {
    return 0x1000 + static_cast<std::uint64_t>(f);
}

ComplexMatrix random_unitary_mgs(std::size_t n, Rng& rng) {
    ComplexMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = cplx(rng.gaussian(), rng.gaussian());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < j; ++m) {
            cplx proj(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) proj += std::conj(g(k, m)) * g(k, j);
            for (std::size_t k = 0; k < n; ++k) g(k, j) -= proj * g(k, m);
        }
        double nrm = 0.0;
        for (std::size_t k = 0; k < n; ++k) nrm += std::norm(g(k, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {
            for (std::size_t k = 0; k < n; ++k) g(k, j) = (k == j) ? 1.0 : 0.0;
            nrm = 1.0;
        }
        for (std::size_t k = 0; k < n; ++k) g(k, j) /= nrm;
    }
    return g;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    return idx;
}

double nonzero_weight(int bound, Rng& rng) {
    const int mag = static_cast<int>(rng.uniform_int(1, std::max(1, bound)));
    const bool neg = rng.uniform_int(0, 1) == 1;
    const bool recip = rng.uniform_int(0, 1) == 1;
    double w = recip ? 1.0 / mag : double(mag);
    return neg ? -w : w;
}

ComplexMatrix gen_involution(std::size_t n, int bound, Rng& rng, bool distinct_weights) {
    ComplexMatrix t(n);
    const std::vector<std::size_t> idx = shuffled_indices(n, rng);
    std::size_t pos = 0;
    int cycle = 0;
    while (pos < n) {
        const std::size_t rem = n - pos;
        const bool fixed = rem == 1 || (!distinct_weights && rng.uniform_int(0, 2) == 0);
        if (fixed) {
            t(idx[pos], idx[pos]) = rng.uniform_int(0, 1) == 0 ? 1.0 : -1.0;
            pos += 1;
        } else {
            const std::size_t i = idx[pos], j = idx[pos + 1];
            double w;
            if (distinct_weights) {
                // distinct singular values: cycle k carries weight k+2
                w = double(cycle + 2);
                if (rng.uniform_int(0, 1) == 1) w = -w;
            } else {
                w = nonzero_weight(bound, rng);
            }
            t(i, j) = w;
            t(j, i) = 1.0 / w;
            pos += 2;
            ++cycle;
        }
    }
    return t;
}

ComplexMatrix gen_nilpotent2(std::size_t n, int bound, Rng& rng) {
    ComplexMatrix t(n);
    if (n == 1) return t; // the 1x1 square-zero matrix is the zero matrix
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 1));
    bool nonzero = false;
    for (int attempt = 0; attempt < 8 && !nonzero; ++attempt) {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = p; j < n; ++j) {
                const double v = double(rng.uniform_int(-bound, bound));
                t(i, j) = v;
                if (v != 0.0) nonzero = true;
            }
    }
    if (!nonzero) t(0, p) = 1.0;
    return t;
}

ComplexMatrix gen_normal(std::size_t n, int bound, Rng& rng) {
    std::vector<cplx> lam(n);
    for (auto& l : lam)
        l = cplx(double(rng.uniform_int(-bound, bound)), double(rng.uniform_int(-bound, bound)));
    const ComplexMatrix v = random_unitary_mgs(n, rng);
    return v * ComplexMatrix::diagonal(lam) * v.adjoint();
}

void verify_contract(const RandomSpec& spec, const ComplexMatrix& t) {
    const double scale = std::max(1.0, t.frobenius_norm() * t.frobenius_norm());
    switch (spec.family) {
        case Family::involution:
        case Family::weighted_involutive_permutation:
            if (distance(t * t, ComplexMatrix::identity(t.dim())) > 1e-10 * scale)
                throw InvalidSpec("generator contract violated: square is not the identity");
            break;
        case Family::nilpotent2:
            if ((t * t).frobenius_norm() > 1e-10 * scale)
                throw InvalidSpec("generator contract violated: square is not zero");
            break;
        case Family::square_normal: {
            const ComplexMatrix sq = t * t;
            if (commutator_norm(sq, sq.adjoint()) >
                1e-8 * std::max(1.0, sq.frobenius_norm() * sq.frobenius_norm()))
                throw InvalidSpec("generator contract violated: square is not normal");
            break;
        }
        default:
            break;
    }
}

} // namespace

ComplexMatrix generate(const RandomSpec& spec, std::size_t index) {
    spec.validate();
    if (index >= spec.count) throw InvalidSpec("generate: index exceeds spec count");
    Rng rng(mix_seed(mix_seed(spec.seed, family_tag(spec.family)), index));

    ComplexMatrix t;
    switch (spec.family) {
        case Family::integer_dense: {
            t = ComplexMatrix(spec.n);
            for (std::size_t i = 0; i < spec.n; ++i)
                for (std::size_t j = 0; j < spec.n; ++j)
                    t(i, j) = double(rng.uniform_int(-spec.entry_bound, spec.entry_bound));
            break;
        }
        case Family::gaussian_dense: {
            t = ComplexMatrix(spec.n);
            for (std::size_t i = 0; i < spec.n; ++i)
                for (std::size_t j = 0; j < spec.n; ++j)
                    t(i, j) = cplx(rng.gaussian(), rng.gaussian());
            break;
        }
        case Family::involution:
            t = gen_involution(spec.n, spec.entry_bound, rng, false);
            break;
        case Family::weighted_involutive_permutation:
            t = gen_involution(spec.n, spec.entry_bound, rng, true);
            break;
        case Family::nilpotent2:
            t = gen_nilpotent2(spec.n, spec.entry_bound, rng);
            break;
        case Family::normal:
            t = gen_normal(spec.n, spec.entry_bound, rng);
            break;
        case Family::square_normal: {
            // closed families with a normal square, optionally rotated
            const std::int64_t pick = rng.uniform_int(0, 2);
            if (pick == 0)
                t = gen_involution(spec.n, spec.entry_bound, rng, false);
            else if (pick == 1)
                t = gen_nilpotent2(spec.n, spec.entry_bound, rng);
            else
                t = gen_normal(spec.n, spec.entry_bound, rng);
            if (rng.uniform_int(0, 1) == 1) {
                const ComplexMatrix v = random_unitary_mgs(spec.n, rng);
                t = v * t * v.adjoint();
            }
            break;
        }
        case Family::unitary_conjugate: {
            RandomSpec inner = *spec.inner;
            inner.count = std::max(inner.count, index + 1);
            const ComplexMatrix base = generate(inner, index);
            const ComplexMatrix v = random_unitary_mgs(spec.n, rng);
            t = v * base * v.adjoint();
            break;
        }
    }
    verify_contract(spec, t);
    return t;
}

// --- target expressions -----------------------------------------------------

namespace {

enum class Prop {
    normal,
    quasinormal,
    binormal,
    hyponormal,
    paranormal,
    cs,
    psd,
    involution,
    weighted_permutation,
    centered,
};

enum class Ref { base, squared, aluthge, duggal };

Prop prop_from_name(const std::string& name, int pos) {
    static const std::map<std::string, Prop> table = {
        {"normal", Prop::normal},
        {"quasinormal", Prop::quasinormal},
        {"binormal", Prop::binormal},
        {"hyponormal", Prop::hyponormal},
        {"paranormal", Prop::paranormal},
        {"cs", Prop::cs},
        {"psd", Prop::psd},
        {"involution", Prop::involution},
        {"weighted_permutation", Prop::weighted_permutation},
        {"centered", Prop::centered},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ParseError("unknown property '" + name + "'", 1, pos);
    return it->second;
}

Ref ref_from_name(const std::string& name, int pos) {
    if (name == "T") return Ref::base;
    if (name == "T2") return Ref::squared;
    if (name == "aluthge") return Ref::aluthge;
    if (name == "duggal") return Ref::duggal;
    throw ParseError("unknown matrix reference '" + name + "'", 1, pos);
}

} // namespace

struct TargetExpr::Node {
    enum class Kind { atom, negate, conjunction, disjunction } kind = Kind::atom;
    Prop prop = Prop::binormal;
    Ref ref = Ref::base;
    std::vector<std::shared_ptr<const Node>> children;
    bool needs_search = false; // subtree touches a conjugation search
};

namespace {

using NodePtr = std::shared_ptr<const TargetExpr::Node>;

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos) throw ParseError("expected identifier", 1, static_cast<int>(pos) + 1);
        return text.substr(start, pos - start);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_and();
        skip_ws();
        if (pos < text.size() && text[pos] == '|') {
            auto node = std::make_shared<TargetExpr::Node>();
            node->kind = TargetExpr::Node::Kind::disjunction;
            node->children.push_back(lhs);
            while (eat('|')) node->children.push_back(parse_and());
            for (const auto& c : node->children) node->needs_search |= c->needs_search;
            return node;
        }
        return lhs;
    }

    NodePtr parse_and() {
        NodePtr lhs = parse_unary();
        skip_ws();
        if (pos < text.size() && text[pos] == '&') {
            auto node = std::make_shared<TargetExpr::Node>();
            node->kind = TargetExpr::Node::Kind::conjunction;
            node->children.push_back(lhs);
            while (eat('&')) node->children.push_back(parse_unary());
            for (const auto& c : node->children) node->needs_search |= c->needs_search;
            return node;
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (eat('!')) {
            auto node = std::make_shared<TargetExpr::Node>();
            node->kind = TargetExpr::Node::Kind::negate;
            node->children.push_back(parse_unary());
            node->needs_search = node->children[0]->needs_search;
            return node;
        }
        if (eat('(')) {
            NodePtr inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", 1, static_cast<int>(pos) + 1);
            return inner;
        }
        auto node = std::make_shared<TargetExpr::Node>();
        node->kind = TargetExpr::Node::Kind::atom;
        node->prop = prop_from_name(ident(), static_cast<int>(pos));
        if (eat('@')) node->ref = ref_from_name(ident(), static_cast<int>(pos));
        node->needs_search = node->prop == Prop::cs;
        return node;
    }
};

Analysis& resolve_ref(Analysis& a, Ref ref) {
    switch (ref) {
        case Ref::base: return a;
        case Ref::squared: return a.squared();
        case Ref::aluthge: return a.aluthge_transform();
        case Ref::duggal: return a.duggal_transform();
    }
    return a;
}

std::optional<bool> eval_node(const TargetExpr::Node& node, Analysis& a);

std::optional<bool> eval_atom(const TargetExpr::Node& node, Analysis& a) {
    Analysis& m = resolve_ref(a, node.ref);
    switch (node.prop) {
        case Prop::normal: return m.normal().value;
        case Prop::quasinormal: return m.quasinormal().value;
        case Prop::binormal: return m.binormal().value;
        case Prop::hyponormal: return m.hyponormal().value;
        case Prop::paranormal: {
            switch (m.paranormal().verdict) {
                case ParanormalVerdict::yes: return true;
                case ParanormalVerdict::no: return false;
                default: return std::nullopt;
            }
        }
        case Prop::cs: {
            switch (m.cs().kind) {
                case CsKind::certified_cs: return true;
                case CsKind::certified_not_cs: return false;
                default: return std::nullopt;
            }
        }
        case Prop::psd: return m.structure().is_psd;
        case Prop::involution: return m.structure().is_involution;
        case Prop::weighted_permutation: return m.structure().is_weighted_permutation;
        case Prop::centered: return m.centered();
    }
    return std::nullopt;
}

std::optional<bool> eval_node(const TargetExpr::Node& node, Analysis& a) {
    using Kind = TargetExpr::Node::Kind;
    switch (node.kind) {
        case Kind::atom:
            return eval_atom(node, a);
        case Kind::negate: {
            auto v = eval_node(*node.children[0], a);
            if (!v) return std::nullopt;
            return !*v;
        }
        case Kind::conjunction: {
            // cheap subtrees first so a false settles without a search
            bool unknown = false;
            for (int phase = 0; phase < 2; ++phase) {
                for (const auto& c : node.children) {
                    if ((phase == 1) != c->needs_search) continue;
                    auto v = eval_node(*c, a);
                    if (v && !*v) return false;
                    if (!v) unknown = true;
                }
            }
            if (unknown) return std::nullopt;
            return true;
        }
        case Kind::disjunction: {
            bool unknown = false;
            for (int phase = 0; phase < 2; ++phase) {
                for (const auto& c : node.children) {
                    if ((phase == 1) != c->needs_search) continue;
                    auto v = eval_node(*c, a);
                    if (v && *v) return true;
                    if (!v) unknown = true;
                }
            }
            if (unknown) return std::nullopt;
            return false;
        }
    }
    return std::nullopt;
}

} // namespace

TargetExpr TargetExpr::parse(const std::string& text) {
    Parser p(text);
    TargetExpr e;
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw ParseError("trailing input in target expression", 1, static_cast<int>(p.pos) + 1);
    e.text_ = text;
    return e;
}

std::optional<bool> TargetExpr::evaluate(Analysis& a) const {
    return eval_node(*root_, a);
}

HuntOutcome hunt(const TargetExpr& target, const RandomSpec& spec, std::size_t budget,
                 const AnalysisOptions& opts, int jobs) {
    RandomSpec scan = spec;
    scan.count = std::max<std::size_t>(budget, 1);

    HuntOutcome out;
    out.samples = budget;

    std::vector<char> is_match(budget, 0);
    std::unordered_map<std::string, bool> cache; // matrix bytes -> matched
    std::mutex cache_mutex;

    auto key_of = [](const ComplexMatrix& m) {
        return std::string(reinterpret_cast<const char*>(m.entries().data()),
                           m.entries().size() * sizeof(cplx));
    };

    parallel_for(budget, jobs, [&](std::size_t i) {
        const ComplexMatrix t = generate(scan, i);
        const std::string key = key_of(t);
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            auto it = cache.find(key);
            if (it != cache.end()) {
                is_match[i] = it->second ? 1 : 0;
                return;
            }
        }
        Analysis a(t, opts);
        const std::optional<bool> verdict = target.evaluate(a);
        const bool matched = verdict.has_value() && *verdict;
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            cache.emplace(key, matched);
        }
        is_match[i] = matched ? 1 : 0;
    });

    for (std::size_t i = 0; i < budget; ++i)
        if (is_match[i]) out.matches.push_back(HuntMatch{i, generate(scan, i)});
    out.exhausted = out.matches.empty();
    return out;
}

} // namespace oplab
