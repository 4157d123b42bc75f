#pragma once

#include <stdexcept>
#include <string>

namespace oplab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPsd : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    NoConvergence(const std::string& what, int iters)
        : Error(what + " (after " + std::to_string(iters) + " iterations)"), iterations(iters) {}
    int iterations;
};

struct InvalidConjugation : Error {
    using Error::Error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

struct UnknownTheorem : Error {
    using Error::Error;
};

struct UnknownGenerator : Error {
    using Error::Error;
};

struct ReportInconsistency : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line_no = 0, int column_no = 0)
        : Error(format(what, line_no, column_no)), line(line_no), column(column_no) {}
    int line;
    int column;

private:
    static std::string format(const std::string& what, int line_no, int column_no) {
        if (line_no <= 0) return what;
        std::string s = what + " at line " + std::to_string(line_no);
        if (column_no > 0) s += ", column " + std::to_string(column_no);
        return s;
    }
};

} // namespace oplab
