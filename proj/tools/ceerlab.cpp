#include <iostream>
#include <string>
#include <vector>

#include "ceerlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ceerlab::cli::execute(args, std::cout, std::cerr);
}
