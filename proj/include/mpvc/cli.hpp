#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpvc {

/// Runs one CLI command. args excludes the program name.
/// Exit codes: 0 completed (any verdict), 2 usage or parse error,
/// 3 numerical failure, 4 infeasible point where feasibility is required.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpvc
