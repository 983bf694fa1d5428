#include <iostream>
#include <string>
#include <vector>

#include "vga/tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vga::tools::run_cli(args, std::cout, std::cerr);
}
