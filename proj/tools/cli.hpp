#pragma once

#include <ostream>

namespace sfd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kDegenerate = 3,
  kUnrecognized = 4,
};

// Runs the command line and writes one JSON document to out.
int run(int argc, const char* const* argv, std::ostream& out);

}  // namespace sfd::cli
