#include "oplab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace oplab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad numeric literal '" + s + "'");
    return v;
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& e : m.entries())
        rows.push_back(ordered_json::array({format_double(e.real()), format_double(e.imag())}));
    return rows;
}

ComplexMatrix matrix_from_json_sized(const ordered_json& entries, std::size_t n) {
    if (!entries.is_array() || entries.size() != n * n)
        throw ParseError("entry list length " + std::to_string(entries.size()) +
                         " does not match dimension " + std::to_string(n));
    ComplexMatrix m(n);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& pair = entries[k];
        if (!pair.is_array() || pair.size() != 2)
            throw ParseError("entry " + std::to_string(k) + " is not a (re, im) pair");
        const double re = pair[0].is_string() ? parse_double(pair[0].get<std::string>())
                                              : pair[0].get<double>();
        const double im = pair[1].is_string() ? parse_double(pair[1].get<std::string>())
                                              : pair[1].get<double>();
        m.entries()[k] = cplx(re, im);
    }
    m.require_valid("parsed matrix");
    return m;
}

ComplexMatrix matrix_from_json(const ordered_json& j) {
    if (!j.is_array()) throw ParseError("matrix entries must be an array");
    const std::size_t total = j.size();
    std::size_t n = 1;
    while (n * n < total) ++n;
    if (n * n != total) throw ParseError("entry count " + std::to_string(total) + " is not a square");
    return matrix_from_json_sized(j, n);
}

namespace {

MatrixDocument parse_matrix_market(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty Matrix Market document", 1);
    ++line_no;
    std::istringstream banner(line);
    std::string tag, object, fmt, field, symmetry;
    banner >> tag >> object >> fmt >> field >> symmetry;
    if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
    if (object != "matrix" || fmt != "array")
        throw ParseError("only 'matrix array' Matrix Market documents are supported", line_no);
    if (field != "complex" && field != "real")
        throw ParseError("only complex or real fields are supported", line_no);
    if (symmetry != "general")
        throw ParseError("only 'general' symmetry is supported", line_no);
    const bool complex_field = field == "complex";

    // skip comments
    std::size_t rows = 0, cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream dims(line);
        if (!(dims >> rows >> cols)) throw ParseError("bad size line", line_no);
        break;
    }
    if (rows == 0 || rows != cols)
        throw ParseError("matrix must be square and nonempty", line_no);

    ComplexMatrix m(rows);
    // array format is column major
    std::size_t have = 0;
    while (have < rows * cols && std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        double re, im = 0.0;
        if (!(entry >> re)) throw ParseError("bad entry", line_no);
        if (complex_field && !(entry >> im)) throw ParseError("missing imaginary part", line_no);
        const std::size_t col = have / rows;
        const std::size_t row = have % rows;
        m(row, col) = cplx(re, im);
        ++have;
    }
    if (have != rows * cols)
        throw ParseError("expected " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(have),
                         line_no);

    MatrixDocument doc;
    doc.matrix = std::move(m);
    return doc;
}

} // namespace

MatrixDocument parse_matrix(const std::string& text, MatrixFormat format) {
    if (format == MatrixFormat::matrix_market) return parse_matrix_market(text);

    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("matrix document must be a JSON object");
    MatrixDocument doc;
    doc.name = j.value("name", std::string());
    if (!j.contains("n")) throw ParseError("matrix document is missing 'n'");
    const std::size_t n = j["n"].get<std::size_t>();
    if (!j.contains("entries")) throw ParseError("matrix document is missing 'entries'");
    doc.matrix = matrix_from_json_sized(j["entries"], n);
    if (j.contains("expected")) doc.expected = j["expected"];
    doc.provenance = j.value("provenance", std::string());
    return doc;
}

MatrixDocument parse_matrix_auto(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '%')
        return parse_matrix(text, MatrixFormat::matrix_market);
    return parse_matrix(text, MatrixFormat::json);
}

std::string emit_matrix(const MatrixDocument& doc) {
    ordered_json j;
    j["name"] = doc.name;
    j["n"] = doc.matrix.dim();
    j["entries"] = matrix_to_json(doc.matrix);
    if (!doc.expected.is_null()) j["expected"] = doc.expected;
    if (!doc.provenance.empty()) j["provenance"] = doc.provenance;
    return j.dump(2) + "\n";
}

namespace {

ordered_json vector_to_json(const std::vector<cplx>& v) {
    ordered_json out = ordered_json::array();
    for (const auto& e : v)
        out.push_back(ordered_json::array({format_double(e.real()), format_double(e.imag())}));
    return out;
}

std::vector<cplx> vector_from_json(const ordered_json& j) {
    std::vector<cplx> v;
    for (const auto& pair : j)
        v.emplace_back(parse_double(pair[0].get<std::string>()),
                       parse_double(pair[1].get<std::string>()));
    return v;
}

const char* cs_kind_name(CsKind k) {
    switch (k) {
        case CsKind::certified_cs: return "certified_cs";
        case CsKind::certified_not_cs: return "certified_not_cs";
        default: return "inconclusive";
    }
}

CsKind cs_kind_from_name(const std::string& s) {
    if (s == "certified_cs") return CsKind::certified_cs;
    if (s == "certified_not_cs") return CsKind::certified_not_cs;
    if (s == "inconclusive") return CsKind::inconclusive;
    throw ParseError("unknown cs kind '" + s + "'");
}

const char* paranormal_name(ParanormalVerdict v) {
    switch (v) {
        case ParanormalVerdict::yes: return "yes";
        case ParanormalVerdict::no: return "no";
        default: return "inconclusive";
    }
}

ParanormalVerdict paranormal_from_name(const std::string& s) {
    if (s == "yes") return ParanormalVerdict::yes;
    if (s == "no") return ParanormalVerdict::no;
    if (s == "inconclusive") return ParanormalVerdict::inconclusive;
    throw ParseError("unknown paranormal verdict '" + s + "'");
}

} // namespace

ordered_json report_to_json(const ComplexMatrix& m, const Analysis::Report& report,
                            const AnalysisOptions& opts) {
    const PropertyReport& p = report.properties;
    ordered_json j;
    j["n"] = m.dim();
    j["matrix"] = matrix_to_json(m);
    j["normal"] = {{"value", p.normal.value}, {"witness", format_double(p.normal.witness)}};
    j["quasinormal"] = {{"value", p.quasinormal.value},
                        {"witness", format_double(p.quasinormal.witness)}};
    j["binormal"] = {{"value", p.binormal.value}, {"witness", format_double(p.binormal.witness)}};
    j["hyponormal"] = {{"value", p.hyponormal.value},
                       {"min_eigenvalue", format_double(p.hyponormal.min_eigenvalue)},
                       {"witness_vector", vector_to_json(p.hyponormal.witness_vector)}};
    j["paranormal"] = {{"verdict", paranormal_name(p.paranormal.verdict)},
                       {"defect", format_double(p.paranormal.defect)},
                       {"witness", vector_to_json(p.paranormal.witness)}};
    j["centered"] = {{"value", p.centered}, {"depth", p.centered_depth}};
    j["structure"] = {{"psd", p.structure.is_psd},
                      {"unitary", p.structure.is_unitary},
                      {"involution", p.structure.is_involution},
                      {"self_adjoint", p.structure.is_self_adjoint},
                      {"weighted_permutation", p.structure.is_weighted_permutation}};
    j["subnormal"] = {{"value", p.subnormal}, {"note", p.subnormal_note}};

    ordered_json cs;
    cs["kind"] = cs_kind_name(report.cs.kind);
    cs["value"] = format_double(report.cs.value);
    if (report.cs.conjugation)
        cs["conjugation"] = matrix_to_json(report.cs.conjugation->j());
    if (!report.cs.screen_id.empty()) cs["screen"] = report.cs.screen_id;
    j["cs"] = cs;

    j["meta"] = {
        {"paranormal_definition", "||Tx||^2 <= ||T^2 x|| * ||x|| for all x"},
        {"tolerances",
         {{"eps_comm", format_double(opts.tol.eps_comm)},
          {"eps_psd", format_double(opts.tol.eps_psd)},
          {"eps_cert", format_double(opts.tol.eps_cert)},
          {"eps_screen", format_double(opts.tol.eps_screen)},
          {"eps_gap", format_double(opts.tol.eps_gap)}}},
        {"seed", std::to_string(opts.seed)},
    };
    return j;
}

ParsedReport report_from_json(const ordered_json& j) {
    ParsedReport out;
    const std::size_t n = j.at("n").get<std::size_t>();
    out.matrix = matrix_from_json_sized(j.at("matrix"), n);

    PropertyReport& p = out.report.properties;
    p.normal.value = j.at("normal").at("value").get<bool>();
    p.normal.witness = parse_double(j.at("normal").at("witness").get<std::string>());
    p.quasinormal.value = j.at("quasinormal").at("value").get<bool>();
    p.quasinormal.witness = parse_double(j.at("quasinormal").at("witness").get<std::string>());
    p.binormal.value = j.at("binormal").at("value").get<bool>();
    p.binormal.witness = parse_double(j.at("binormal").at("witness").get<std::string>());
    p.hyponormal.value = j.at("hyponormal").at("value").get<bool>();
    p.hyponormal.min_eigenvalue =
        parse_double(j.at("hyponormal").at("min_eigenvalue").get<std::string>());
    p.hyponormal.witness_vector = vector_from_json(j.at("hyponormal").at("witness_vector"));
    p.paranormal.verdict = paranormal_from_name(j.at("paranormal").at("verdict").get<std::string>());
    p.paranormal.defect = parse_double(j.at("paranormal").at("defect").get<std::string>());
    p.paranormal.witness = vector_from_json(j.at("paranormal").at("witness"));
    p.centered = j.at("centered").at("value").get<bool>();
    p.centered_depth = j.at("centered").at("depth").get<int>();
    p.structure.is_psd = j.at("structure").at("psd").get<bool>();
    p.structure.is_unitary = j.at("structure").at("unitary").get<bool>();
    p.structure.is_involution = j.at("structure").at("involution").get<bool>();
    p.structure.is_self_adjoint = j.at("structure").at("self_adjoint").get<bool>();
    p.structure.is_weighted_permutation =
        j.at("structure").at("weighted_permutation").get<bool>();
    p.subnormal = j.at("subnormal").at("value").get<bool>();
    p.subnormal_note = j.at("subnormal").at("note").get<std::string>();

    CSVerdict& cs = out.report.cs;
    cs.kind = cs_kind_from_name(j.at("cs").at("kind").get<std::string>());
    cs.value = parse_double(j.at("cs").at("value").get<std::string>());
    if (j.at("cs").contains("conjugation"))
        cs.conjugation = Conjugation(matrix_from_json(j.at("cs").at("conjugation")));
    if (j.at("cs").contains("screen")) cs.screen_id = j.at("cs").at("screen").get<std::string>();
    return out;
}

bool reports_equal(const Analysis::Report& a, const Analysis::Report& b) {
    const PropertyReport& pa = a.properties;
    const PropertyReport& pb = b.properties;
    const bool props =
        pa.normal.value == pb.normal.value && pa.normal.witness == pb.normal.witness &&
        pa.quasinormal.value == pb.quasinormal.value &&
        pa.quasinormal.witness == pb.quasinormal.witness &&
        pa.binormal.value == pb.binormal.value && pa.binormal.witness == pb.binormal.witness &&
        pa.hyponormal.value == pb.hyponormal.value &&
        pa.hyponormal.min_eigenvalue == pb.hyponormal.min_eigenvalue &&
        pa.hyponormal.witness_vector == pb.hyponormal.witness_vector &&
        pa.paranormal.verdict == pb.paranormal.verdict &&
        pa.paranormal.defect == pb.paranormal.defect &&
        pa.paranormal.witness == pb.paranormal.witness && pa.centered == pb.centered &&
        pa.centered_depth == pb.centered_depth && pa.structure.is_psd == pb.structure.is_psd &&
        pa.structure.is_unitary == pb.structure.is_unitary &&
        pa.structure.is_involution == pb.structure.is_involution &&
        pa.structure.is_self_adjoint == pb.structure.is_self_adjoint &&
        pa.structure.is_weighted_permutation == pb.structure.is_weighted_permutation &&
        pa.subnormal == pb.subnormal && pa.subnormal_note == pb.subnormal_note;
    if (!props) return false;
    if (a.cs.kind != b.cs.kind || a.cs.value != b.cs.value || a.cs.screen_id != b.cs.screen_id)
        return false;
    if (a.cs.conjugation.has_value() != b.cs.conjugation.has_value()) return false;
    if (a.cs.conjugation && !(a.cs.conjugation->j() == b.cs.conjugation->j())) return false;
    return true;
}

ordered_json theorem_results_to_json(const std::vector<TheoremResult>& results) {
    ordered_json arr = ordered_json::array();
    for (const auto& res : results) {
        ordered_json j;
        j["theorem"] = res.theorem_id;
        j["instances"] = res.instances_run;
        j["passed"] = res.passed;
        j["skipped"] = res.skipped;
        ordered_json reasons = ordered_json::object();
        for (const auto& [k, v] : res.skip_reasons) reasons[k] = v;
        j["skip_reasons"] = reasons;
        ordered_json dirs = ordered_json::object();
        for (const auto& [k, v] : res.directions)
            dirs[k] = {{"covered", v.covered}, {"passed", v.passed}};
        j["directions"] = dirs;
        ordered_json viols = ordered_json::array();
        for (const auto& v : res.violations) {
            viols.push_back({{"index", v.index},
                             {"n", v.matrix.dim()},
                             {"matrix", matrix_to_json(v.matrix)},
                             {"failure", v.failure}});
        }
        j["violations"] = viols;
        arr.push_back(j);
    }
    return arr;
}

ordered_json fixture_outcomes_to_json(const std::vector<FixtureOutcome>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"fixture", r.fixture},
                       {"claim", r.claim},
                       {"expected", r.expected},
                       {"got", r.got},
                       {"ok", r.ok}});
    return arr;
}

} // namespace oplab
