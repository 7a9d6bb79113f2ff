#include <iostream>
#include <string>
#include <vector>

#include "rallyshap/cli.h"

int main(int argc, char** argv) {
  return rallyshap::RunCli(std::vector<std::string>(argv, argv + argc),
                           std::cout, std::cerr);
}
