#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roomgreen::cli {

/// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roomgreen::cli
