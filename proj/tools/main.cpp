#include <iostream>

#include "cert/cli.hpp"

int main(int argc, char** argv) {
  return cert::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
