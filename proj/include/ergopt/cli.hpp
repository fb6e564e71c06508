#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ergopt/config.hpp"

namespace ergopt {

// Exit codes: 0 success, 1 validation error, 2 numerical non-convergence or
// overflow guard, 3 infeasible perturbation constants.
int run_subcommand(const std::string& name, Json config, const std::string& out_dir,
                   std::ostream& out, std::ostream& err);

// Full argv-style entry point shared by the binary and the tests:
//   <subcommand> --config FILE [--set k=v]... [--out DIR]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergopt
