#include <iostream>
#include <string>
#include <vector>

#include "rmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rmc::cli::run(args, std::cout, std::cerr);
}
