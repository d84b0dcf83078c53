#include <iostream>

#include "geodual/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return geodual::run_cli(args, std::cout, std::cerr);
}
