#include <iostream>

#include "hflat/cli.hpp"

int main(int argc, char** argv) {
  return hflat::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
