#include <iostream>
#include <string>
#include <vector>

#include "shearcount/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shearcount::dispatch(args, std::cout, std::cerr);
}
