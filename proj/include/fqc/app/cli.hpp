#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fqc::app {

/// `fqc <task> [--config FILE] [--out DIR] [--seed N] [--threads N]`.
/// Exit codes: 0 success, 2 configuration error, 3 numerical failure or failed result.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fqc::app
