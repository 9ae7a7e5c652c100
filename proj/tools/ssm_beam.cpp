#include <iostream>
#include <string>
#include <vector>

#include "ssmbeam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ssmbeam::run_cli(args, std::cout, std::cerr);
}
