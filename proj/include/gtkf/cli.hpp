#pragma once

#include <iosfwd>

namespace gtkf {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Subcommands: simulate, sweep, decode, disjunct. Errors are reported as a
/// single "error: code=<n> kind=<kind> message=<text>" line on `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gtkf
