#include <iostream>

#include "anlab_cli/commands.hpp"

int main(int argc, char** argv) {
  return anlab::cli::run(argc, argv, std::cout, std::cerr);
}
