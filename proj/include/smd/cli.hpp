#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smd::cli {

/// Runs one `smdalign` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on input/config errors, 2 on internal invariant
/// violations.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smd::cli
