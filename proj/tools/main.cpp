#include <iostream>
#include <string>
#include <vector>

#include "mpvc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mpvc::run(args, std::cout, std::cerr);
}
