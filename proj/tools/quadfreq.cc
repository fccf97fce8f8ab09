#include <iostream>
#include <string>
#include <vector>

#include "quadfreq/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return quadfreq::RunCli(args, std::cout, std::cerr);
}
