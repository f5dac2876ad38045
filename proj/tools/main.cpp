#include <iostream>
#include <string>
#include <vector>

#include "adaptta/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adaptta::cli::run_cli(args, std::cout, std::cerr);
}
