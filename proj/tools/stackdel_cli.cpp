#include <iostream>
#include <string>
#include <vector>

#include "stackdel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stackdel::run_command_line(args, std::cout, std::cerr);
}
