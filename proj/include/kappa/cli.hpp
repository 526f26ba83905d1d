#pragma once

#include <iosfwd>

namespace kappa::cli {

/// Runs the command line. Returns 0 on success, 1 on a runtime error and 2 on
/// a usage error. Errors are one line on `err`: "error[Code]: message".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kappa::cli
