#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oplab {

/// Entry point behind the `oplab` binary. Streams are injected so tests can
/// drive the interface in-process. Exit codes: 0 all checks passed,
/// 1 violation or expectation mismatch, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace oplab
