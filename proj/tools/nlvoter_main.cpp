#include <iostream>

#include "nlvoter/cli.hpp"

int main(int argc, char** argv) {
  return nlvoter::run_cli(argc, argv, std::cout, std::cerr);
}
