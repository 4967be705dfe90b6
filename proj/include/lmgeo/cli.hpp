#pragma once

#include <iosfwd>

namespace lmgeo {

enum ExitCode : int {
  kExitOk = 0,
  kExitMalformedInput = 1,
  kExitDegenerate = 2,
  kExitOracleResidual = 3,
};

/// Entry point for the command-line front end. Normal output goes to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmgeo
