#include <iostream>
#include <vector>

#include "minlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return minlab::run_cli(args, std::cout, std::cerr);
}
