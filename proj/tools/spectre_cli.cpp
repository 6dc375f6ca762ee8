#include <iostream>

#include "spectre/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  spectre::CliResult r = spectre::run_cli(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
