#include <iostream>

#include "scatlab/harness.hpp"

int main(int argc, char** argv) {
  return scatlab::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
