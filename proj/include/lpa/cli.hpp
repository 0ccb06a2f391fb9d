#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpa::cli {

/// Runs the `lpa` command line with `args` (program name excluded). Returns
/// 0 on success, 1 on a domain or parse error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lpa::cli
