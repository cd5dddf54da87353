#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "polarity/common/error.hpp"
#include "polarity/report/run_config.hpp"

namespace polarity::report {

const std::vector<std::string>& command_names();

// Runs one subcommand and returns the artifacts it wrote under config.out.
// Progress lines go to `log`. Failures surface as polarity::Error.
std::vector<std::filesystem::path> run_command(const std::string& command, const RunConfig& config,
                                               std::ostream& log);

// 2 config, 3 io, 4 data, 5 numeric.
int exit_code(ErrorCategory category);

}  // namespace polarity::report
