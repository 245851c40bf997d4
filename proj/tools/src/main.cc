#include <iostream>
#include <string>
#include <vector>

#include "dantzig/cli/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dantzig::cli::Run(args, std::cout, std::cerr);
}
