#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ballsym::cli {

enum Exit : int { Ok = 0, Negative = 1, Usage = 2, Undecided = 3 };

/// Runs one command; `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ballsym::cli
