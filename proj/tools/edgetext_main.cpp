#include <iostream>
#include <string>
#include <vector>

#include "edgetext/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return edgetext::cli_main(args, std::cout, std::cerr);
}
