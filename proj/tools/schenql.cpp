#include <iostream>

#include "schenql/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return schenql::run_cli(args, std::cin, std::cout, std::cerr);
}
