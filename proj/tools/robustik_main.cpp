#include <iostream>
#include <string>
#include <vector>

#include "robustik/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return robustik::cli::run(args, std::cout, std::cerr);
}
