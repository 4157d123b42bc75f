#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "oplab/analysis.hpp"
#include "oplab/theorems.hpp"

namespace oplab {

using ordered_json = nlohmann::ordered_json;

/// Doubles are carried as decimal strings ("%.17g") everywhere in the JSON
/// surface, so emit/parse round-trips are bit exact.
std::string format_double(double v);
double parse_double(const std::string& s);

enum class MatrixFormat { json, matrix_market };

struct MatrixDocument {
    std::string name;
    ComplexMatrix matrix;
    ordered_json expected;  // optional claim map, null when absent
    std::string provenance; // optional

    bool operator==(const MatrixDocument& rhs) const {
        return name == rhs.name && matrix == rhs.matrix && expected == rhs.expected &&
               provenance == rhs.provenance;
    }
};

/// JSON document or Matrix Market "array complex general" (real accepted).
/// Integer and short decimal entries parse exactly.
MatrixDocument parse_matrix(const std::string& text, MatrixFormat format);

/// Auto-detects Matrix Market by its banner.
MatrixDocument parse_matrix_auto(const std::string& text);

std::string emit_matrix(const MatrixDocument& doc);

ordered_json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const ordered_json& j);

ordered_json report_to_json(const ComplexMatrix& m, const Analysis::Report& report,
                            const AnalysisOptions& opts);

struct ParsedReport {
    ComplexMatrix matrix;
    Analysis::Report report;
};

/// Inverse of report_to_json over the fields a report owns.
ParsedReport report_from_json(const ordered_json& j);

bool reports_equal(const Analysis::Report& a, const Analysis::Report& b);

ordered_json theorem_results_to_json(const std::vector<TheoremResult>& results);
ordered_json fixture_outcomes_to_json(const std::vector<FixtureOutcome>& rows);

} // namespace oplab
