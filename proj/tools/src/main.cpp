#include <iostream>
#include <string>
#include <vector>

#include "deformtrack_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return deformtrack::cli::run(args, std::cout, std::cerr);
}
