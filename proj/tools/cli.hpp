#pragma once

#include <ostream>

namespace tscale::cli {

/// Runs `ts` with the given arguments. Exit codes: 0 success or Certified,
/// 2 Violated or validation failure, 1 error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tscale::cli
