#include <iostream>

#include "matchq_cli/commands.hpp"

int main(int argc, char** argv) {
  return matchq::cli::run(argc, argv, std::cout, std::cerr);
}
