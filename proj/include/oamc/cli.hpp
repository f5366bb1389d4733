#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oamc {

// Runs one CLI invocation; `args` excludes the program name. Reports go to
// `out` as JSON lines (or certificate text for verify-mds), diagnostics to
// `err`. Exit codes: 0 ok, 1 usage, 2 insufficient chunks, 3 verification
// failure, 4 budget exceeded, 5 I/O or corruption.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace oamc
