#include <iostream>
#include <string>
#include <vector>

#include "qgcnet/tools/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qgc::tools::run_cli(args, std::cout, std::cerr);
}
