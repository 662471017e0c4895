#pragma once

#include <string>
#include <vector>

namespace fdrec::cli {

// Entry point behind main(). Exit codes: 0 success, 1 invalid input or
// configuration, 2 internal failure.
int run(const std::vector<std::string>& args);

}  // namespace fdrec::cli
