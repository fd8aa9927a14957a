#include <iostream>

#include "ergokit/cli.hpp"

int main(int argc, char** argv) {
  return ergokit::run_cli(argc, argv, std::cout, std::cerr);
}
