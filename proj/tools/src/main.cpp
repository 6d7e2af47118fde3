#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "bougerol_cli/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return bougerol::cli::run(args, std::getenv(bougerol::cli::kSeedEnv), std::cout, std::cerr);
}
