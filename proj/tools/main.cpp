#include <iostream>
#include <string>
#include <vector>

#include "cotkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cotkit::run_cli(args, std::cout, std::cerr);
}
