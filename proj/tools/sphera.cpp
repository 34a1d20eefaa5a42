#include <iostream>
#include <string>
#include <vector>

#include "sphera/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sphera::cli::run(args, std::cout, std::cerr);
}
