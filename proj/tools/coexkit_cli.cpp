#include <cstdlib>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return coexkit::cli::run(args, std::cout, std::cerr, std::getenv("COEXKIT_SEED"));
}
