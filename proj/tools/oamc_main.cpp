#include <iostream>
#include <string>
#include <vector>

#include "oamc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return oamc::cli_dispatch(args, std::cout, std::cerr);
}
