#pragma once

#include <iosfwd>

namespace wheelsim::cli {

/// Entry point of the `wheelsim` tool: replay | validate | serve.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wheelsim::cli
