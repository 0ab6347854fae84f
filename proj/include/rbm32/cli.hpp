#pragma once

// Command-line front end. The executable forwards argv here so tests can run
// commands in-process.
//
// Exit codes:
//   0  success
//   1  usage error (unknown verb or flag, bad flag value)
//   2  malformed JSON input
//   3  invalid tensor (negative entries, wrong sum, non-finite values)
//   4  tensor is not a member of the requested model
//   5  degenerate input (boundary input to an interior-only test,
//      non-generic heights)
//   6  internal error

#include <iosfwd>
#include <string>
#include <vector>

namespace rbm32 {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitMalformedJson = 2,
  kExitInvalidTensor = 3,
  kExitNotMember = 4,
  kExitDegenerate = 5,
  kExitInternal = 6,
};

/// `args` excludes the program name. Payload goes to `out`, diagnostics and
/// progress to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rbm32
