#include <iostream>
#include <string>
#include <vector>

#include "cosetlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cosetlab::run(args, std::cout, std::cerr);
}
