#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathembed::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit status: 0 success, 1 invariant/budget/internal failure, 2 usage or input error.
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace pathembed::cli
