#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ancova::cli {

/// Entry point shared by main() and the tests. Returns the process exit
/// code: 0 success, 2 input or config error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ancova::cli
