#include <iostream>
#include <string>
#include <vector>

#include "cremona/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cremona::run_command(args, std::cout, std::cerr);
}
