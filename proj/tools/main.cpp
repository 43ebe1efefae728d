#include <iostream>
#include <string>
#include <vector>

#include "tessera/cli/cli.hpp"

int main(int argc, char** argv) {
  return tessera::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
