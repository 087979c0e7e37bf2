#ifndef RDTFG_CLI_HPP
#define RDTFG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rdtfg/error.hpp"

namespace rdtfg::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kComputation = 3, kAudit = 4 };

ExitCode exit_code_for(ErrorKind kind) noexcept;

/// args excludes the program name. Environment variables RDTFG_<FLAG> fill
/// flags that are not given on the command line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rdtfg::cli

#endif
