#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace namelogic::cli {

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// code: 0 affirmative, 1 negative, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace namelogic::cli
