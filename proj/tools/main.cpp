#include <iostream>

#include "repsel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return repsel::run_cli(args, std::cout, std::cerr);
}
