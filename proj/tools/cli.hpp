#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mermin::cli {

// Runs one command line (argv without the program name). Returns 0 on
// success, 2 on usage errors and 1 on computation errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mermin::cli
