#include <iostream>
#include <string>
#include <vector>

#include "wrr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wrr::run(args, std::cout, std::cerr);
}
