#include <iostream>
#include <string>
#include <vector>

#include "tbr/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tbr::run_cli(args, std::cin, std::cout, std::cerr);
}
