#include <iostream>

#include "torsionkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return torsionkit::run_cli(args, std::cout, std::cerr);
}
