#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qam::cli {

/// Runs one qamean command. `args` excludes the program name.
/// Returns 0 on success, 1 when a verify check fails, 2 on usage or domain errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qam::cli
