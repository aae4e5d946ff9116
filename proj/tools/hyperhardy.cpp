#include <iostream>
#include <string>
#include <vector>

#include "hyperhardy/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return hyperhardy::run_cli(args, std::cout, std::cerr);
}
