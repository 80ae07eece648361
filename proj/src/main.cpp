#include <iostream>

#include "ramfiltre/cli.hpp"

int main(int argc, char** argv) {
  return ramfiltre::cli::run(argc, argv, std::cout, std::cerr);
}
