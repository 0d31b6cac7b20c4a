#include <iostream>
#include <string>
#include <vector>

#include "qhdyson/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qhdyson::cli::run(args, std::cout, std::cerr);
}
