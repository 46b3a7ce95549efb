#include "mirrork/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mirrork::run(args, std::cout, std::cerr);
}
