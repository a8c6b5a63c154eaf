#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace prv::cli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,
  kMismatch = 1,   // reproduce found values outside tolerance
  kInputError = 2,
  kDegenerate = 3,
  kBoundary = 4,
};

/// Entry point shared by the `prv` binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prv::cli
