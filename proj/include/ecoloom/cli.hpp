#pragma once

#include <ostream>

namespace ecoloom::cli {

// Process exit statuses. These values are part of the command-line contract.
enum ExitCode : int {
  kOk = 0,
  kRejected = 1,  // invalid model or config, unknown exemplar, no species match
  kIoError = 2,
  kNetworkError = 3,
  kUsage = 64,    // bad arguments
};

/// Entry point behind the `ecoloom` binary. Never throws.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ecoloom::cli
