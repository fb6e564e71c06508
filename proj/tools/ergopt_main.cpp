#include <iostream>
#include <string>
#include <vector>

#include "ergopt/cli.hpp"

namespace {

const char* kUsage =
    "usage: ergopt <subcommand> --config FILE [--set path=value]... [--out DIR]\n"
    "\n"
    "subcommands:\n"
    "  subaction   solve for a calibrated sub-action and the ergodic maximum\n"
    "  alpha       cross-validate -alpha(F) by three independent routes\n"
    "  maxorbit    best periodic orbit for the observable, with runner-up gap\n"
    "  shadow      shadow a pseudo-orbit by a true (periodic) orbit\n"
    "  perturb     build the orbit-locking perturbation and certify it\n"
    "  gibbs       equilibrium state at one inverse temperature\n"
    "  sweep       zero-temperature diagnostic sweep over a beta schedule\n"
    "  entropy     Brin-Katok and partition entropy estimates\n"
    "  bq          low-period orbits minimizing the distance to a set\n"
    "  morris      distance-penalty perturbation step and maximizer check\n"
    "  returns     return-time gap statistics for a forward orbit\n"
    "\n"
    "environment: ERGOPT_THREADS (sweep workers), ERGOPT_SEED (seed override)\n";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << kUsage;
    return args.empty() ? 1 : 0;
  }
  return ergopt::run_cli(args, std::cout, std::cerr);
}
