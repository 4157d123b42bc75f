#include "oplab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "oplab/io.hpp"
#include "oplab/parallel.hpp"

namespace oplab {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t resolve_seed(bool seed_set, std::uint64_t seed_flag) {
    if (seed_set) return seed_flag;
    if (const char* env = std::getenv("OPLAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 1;
}

struct GlobalFlags {
    double tol_cert = Tolerances{}.eps_cert;
    double tol_screen = Tolerances{}.eps_screen;
    double tol_comm = Tolerances{}.eps_comm;
    std::uint64_t seed = 1;
    bool seed_set = false;
    int jobs = 1;
    std::string format = "json";

    AnalysisOptions analysis_options() const {
        AnalysisOptions o;
        o.tol.eps_cert = tol_cert;
        o.tol.eps_screen = tol_screen;
        o.tol.eps_comm = tol_comm;
        o.tol.validate();
        o.seed = resolve_seed(seed_set, seed);
        o.jobs = jobs;
        return o;
    }
};

std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        dims.push_back(static_cast<std::size_t>(std::stoul(item)));
    }
    if (dims.empty()) throw InvalidSpec("empty dimension list");
    return dims;
}

int cmd_check(const std::string& path, const GlobalFlags& g, std::ostream& out) {
    const MatrixDocument doc = parse_matrix_auto(read_file(path));
    AnalysisOptions opts = g.analysis_options();
    Analysis a(doc.matrix, opts);
    const Analysis::Report report = a.report();

    int code = 0;
    ordered_json mismatches = ordered_json::array();
    if (doc.expected.is_object()) {
        for (const auto& [claim, want] : doc.expected.items()) {
            const std::string expected =
                want.is_boolean() ? (want.get<bool>() ? "true" : "false") : want.get<std::string>();
            const std::string got = evaluate_claim(a, claim);
            if (got != expected) {
                code = 1;
                mismatches.push_back({{"claim", claim}, {"expected", expected}, {"got", got}});
            }
        }
    }

    if (g.format == "json") {
        ordered_json j = report_to_json(doc.matrix, report, opts);
        if (!doc.name.empty()) j["name"] = doc.name;
        if (doc.expected.is_object()) j["expected_mismatches"] = mismatches;
        out << j.dump(2) << "\n";
    } else {
        out << "matrix " << (doc.name.empty() ? path : doc.name) << " (n=" << doc.matrix.dim()
            << ")\n";
        const PropertyReport& p = report.properties;
        out << "  normal:       " << (p.normal.value ? "yes" : "no") << "\n";
        out << "  quasinormal:  " << (p.quasinormal.value ? "yes" : "no") << "\n";
        out << "  binormal:     " << (p.binormal.value ? "yes" : "no") << "\n";
        out << "  hyponormal:   " << (p.hyponormal.value ? "yes" : "no") << "\n";
        out << "  paranormal:   "
            << (p.paranormal.verdict == ParanormalVerdict::yes
                    ? "yes"
                    : p.paranormal.verdict == ParanormalVerdict::no ? "no" : "inconclusive")
            << "\n";
        out << "  centered(d=" << p.centered_depth << "): " << (p.centered ? "yes" : "no") << "\n";
        out << "  cs:           "
            << (report.cs.kind == CsKind::certified_cs
                    ? "certified_cs"
                    : report.cs.kind == CsKind::certified_not_cs ? "certified_not_cs"
                                                                 : "inconclusive")
            << " (" << format_double(report.cs.value) << ")\n";
        for (const auto& m : mismatches)
            out << "  MISMATCH " << m["claim"].get<std::string>() << ": expected "
                << m["expected"].get<std::string>() << ", got " << m["got"].get<std::string>()
                << "\n";
    }
    return code;
}

int cmd_transform(const std::string& path, const std::string& kind, int iterate,
                  const std::string& mode, const GlobalFlags& g, std::ostream& out) {
    const MatrixDocument doc = parse_matrix_auto(read_file(path));
    const AnalysisOptions opts = g.analysis_options();
    ordered_json j;
    if (kind == "polar") {
        const PolarMode pm =
            mode == "unitary_extension" ? PolarMode::unitary_extension : PolarMode::canonical;
        const PolarParts parts = polar(doc.matrix, pm, opts.tol);
        j["kind"] = "polar";
        j["mode"] = mode;
        j["u"] = matrix_to_json(parts.u);
        j["p"] = matrix_to_json(parts.p);
        j["u_unitary"] = parts.u_unitary;
        j["u_self_adjoint"] = parts.u_self_adjoint;
    } else if (kind == "aluthge") {
        j["kind"] = "aluthge";
        if (iterate > 1) {
            const auto iterates = aluthge_iterates(doc.matrix, iterate, opts.tol);
            ordered_json arr = ordered_json::array();
            for (const auto& m : iterates) arr.push_back(matrix_to_json(m));
            j["iterates"] = arr;
        } else {
            j["result"] = matrix_to_json(aluthge(doc.matrix, opts.tol));
        }
    } else if (kind == "duggal") {
        j["kind"] = "duggal";
        j["result"] = matrix_to_json(duggal(doc.matrix, opts.tol));
    } else {
        throw InvalidSpec("unknown transform kind '" + kind + "'");
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& theorems, const std::string& family, const std::string& dims,
               int bound, std::size_t count, const GlobalFlags& g, std::ostream& out) {
    const AnalysisOptions opts = g.analysis_options();
    std::vector<std::string> ids;
    if (theorems == "all") {
        ids = all_theorem_ids();
    } else {
        std::stringstream ss(theorems);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) ids.push_back(item);
    }

    ordered_json output = ordered_json::array();
    std::size_t total_violations = 0;
    for (std::size_t n : parse_dims(dims)) {
        const RandomSpec spec = make_spec(family, n, bound, opts.seed, count);
        const std::vector<TheoremResult> results = run_suite(spec, ids, opts, g.jobs);
        for (const auto& r : results) total_violations += r.violations.size();
        output.push_back({{"family", family},
                          {"n", n},
                          {"count", count},
                          {"seed", std::to_string(opts.seed)},
                          {"results", theorem_results_to_json(results)}});
    }

    if (g.format == "json") {
        out << output.dump(2) << "\n";
    } else {
        for (const auto& block : output) {
            out << "family " << block["family"].get<std::string>() << " n=" << block["n"]
                << " count=" << block["count"] << "\n";
            for (const auto& res : block["results"]) {
                out << "  " << res["theorem"].get<std::string>() << ": passed " << res["passed"]
                    << ", skipped " << res["skipped"] << ", violations "
                    << res["violations"].size() << "\n";
            }
        }
        out << "total violations: " << total_violations << "\n";
    }
    return total_violations == 0 ? 0 : 1;
}

int cmd_hunt(const std::string& target, const std::string& family, std::size_t n, int bound,
             std::size_t budget, const std::string& out_path, const GlobalFlags& g,
             std::ostream& out) {
    const AnalysisOptions opts = g.analysis_options();
    const TargetExpr expr = TargetExpr::parse(target);
    const RandomSpec spec = make_spec(family, n, bound, opts.seed, std::max<std::size_t>(budget, 1));
    const HuntOutcome found = hunt(expr, spec, budget, opts, g.jobs);

    ordered_json matches = ordered_json::array();
    for (std::size_t k = 0; k < found.matches.size(); ++k) {
        const HuntMatch& m = found.matches[k];
        Analysis a(m.matrix, opts);
        MatrixDocument doc;
        doc.name = "hunt_" + std::to_string(m.index);
        doc.matrix = m.matrix;
        doc.provenance = "hunt target=" + target + " family=" + family +
                         " n=" + std::to_string(n) + " bound=" + std::to_string(bound) +
                         " seed=" + std::to_string(opts.seed) +
                         " index=" + std::to_string(m.index);
        if (!out_path.empty()) {
            const std::string file = out_path + "/hunt_" + std::to_string(m.index) + ".json";
            std::ofstream f(file, std::ios::binary);
            if (!f) throw ParseError("cannot write file '" + file + "'");
            f << emit_matrix(doc);
        }
        matches.push_back({{"index", m.index},
                           {"matrix", matrix_to_json(m.matrix)},
                           {"report", report_to_json(m.matrix, a.report(), opts)}});
    }

    ordered_json j;
    j["target"] = target;
    j["family"] = family;
    j["n"] = n;
    j["bound"] = bound;
    j["budget"] = budget;
    j["seed"] = std::to_string(opts.seed);
    j["samples"] = found.samples;
    j["match_count"] = found.matches.size();
    j["matches"] = matches;
    if (g.format == "json")
        out << j.dump(2) << "\n";
    else
        out << "hunt found " << found.matches.size() << " match(es) in " << found.samples
            << " samples\n";
    return found.matches.empty() ? 1 : 0;
}

int cmd_fixtures(const GlobalFlags& g, std::ostream& out) {
    const AnalysisOptions opts = g.analysis_options();
    const std::vector<FixtureOutcome> rows = run_fixtures(opts);
    bool all_ok = true;
    for (const auto& r : rows) all_ok = all_ok && r.ok;
    if (g.format == "json") {
        ordered_json j;
        j["fixtures"] = fixture_outcomes_to_json(rows);
        j["all_ok"] = all_ok;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : rows)
            out << (r.ok ? "  ok   " : "  FAIL ") << r.fixture << " " << r.claim << "  expected "
                << r.expected << ", got " << r.got << "\n";
        out << (all_ok ? "all fixture claims reproduced\n" : "fixture mismatches present\n");
    }
    return all_ok ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"operator property lab: binormality, complex symmetry, and transforms"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--tol-cert", g.tol_cert, "certificate residual bound");
    app.add_option("--tol-screen", g.tol_screen, "refutation margin");
    app.add_option("--tol-comm", g.tol_comm, "relative commutator tolerance");
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed (default: OPLAB_SEED or 1)");
    app.add_option("--jobs", g.jobs, "worker threads (0 = all cores, 1 = serial)");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    std::string check_file;
    auto* check = app.add_subcommand("check", "classify a matrix file");
    check->add_option("file", check_file, "matrix document (JSON or Matrix Market)")->required();

    std::string tr_file, tr_kind, tr_mode = "canonical";
    int tr_iterate = 1;
    auto* transform = app.add_subcommand("transform", "polar, Aluthge, or Duggal transform");
    transform->add_option("file", tr_file)->required();
    transform->add_option("--kind", tr_kind)->required()->check(
        CLI::IsMember({"polar", "aluthge", "duggal"}));
    transform->add_option("--iterate", tr_iterate, "repeat the Aluthge transform k times");
    transform->add_option("--mode", tr_mode)->check(
        CLI::IsMember({"canonical", "unitary_extension"}));

    std::string v_theorems = "all", v_family, v_dims = "4";
    int v_bound = 2;
    std::size_t v_count = 100;
    auto* verify = app.add_subcommand("verify", "run theorem checks over a random ensemble");
    verify->add_option("--theorems", v_theorems, "comma list of theorem ids, or 'all'");
    verify->add_option("--family", v_family)->required();
    verify->add_option("--n", v_dims, "comma list of dimensions");
    verify->add_option("--bound", v_bound, "integer entry bound");
    verify->add_option("--count", v_count, "instances per dimension");

    std::string h_target, h_family, h_out;
    std::size_t h_n = 3, h_budget = 1000;
    int h_bound = 1;
    auto* hunt_cmd = app.add_subcommand("hunt", "search an ensemble for a property combination");
    hunt_cmd->add_option("--target", h_target)->required();
    hunt_cmd->add_option("--family", h_family)->required();
    hunt_cmd->add_option("--n", h_n);
    hunt_cmd->add_option("--bound", h_bound);
    hunt_cmd->add_option("--budget", h_budget);
    hunt_cmd->add_option("--out", h_out, "directory for matched matrix documents");

    auto* fixtures = app.add_subcommand("fixtures", "reproduce the bundled fixture table");
    (void)fixtures;

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }
    g.seed_set = seed_opt->count() > 0;

    try {
        if (app.got_subcommand("check")) return cmd_check(check_file, g, out);
        if (app.got_subcommand("transform"))
            return cmd_transform(tr_file, tr_kind, tr_iterate, tr_mode, g, out);
        if (app.got_subcommand("verify"))
            return cmd_verify(v_theorems, v_family, v_dims, v_bound, v_count, g, out);
        if (app.got_subcommand("hunt"))
            return cmd_hunt(h_target, h_family, h_n, h_bound, h_budget, h_out, g, out);
        if (app.got_subcommand("fixtures")) return cmd_fixtures(g, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

} // namespace oplab
