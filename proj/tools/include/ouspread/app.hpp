#pragma once

#include <iosfwd>

namespace ouspread {

/// Entry point of the `ouspread` command; returns the process exit code.
///   0  success
///   1  validate found a failing check
///   2  invalid input, out-of-range query or solver failure
/// Parse errors return CLI11's own codes.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ouspread
