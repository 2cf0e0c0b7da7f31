#include <iostream>

#include "catlim/cli.hpp"

int main(int argc, char** argv) {
  return catlim::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
