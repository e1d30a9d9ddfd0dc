#include <iostream>

#include "qamean/cli.hpp"

int main(int argc, char** argv) {
  return qam::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
