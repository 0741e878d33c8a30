#include <iostream>
#include <string>
#include <vector>

#include "cvgn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cvgn::cli::run(args, std::cout, std::cerr);
}
