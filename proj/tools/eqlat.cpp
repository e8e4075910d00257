#include <iostream>
#include <string>
#include <vector>

#include "eqlat/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return eqlat::cli::run(args, std::cout, std::cerr);
}
