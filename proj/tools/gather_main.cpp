#include <iostream>

#include "gather/cli.hpp"

int main(int argc, char** argv) {
  return gather::cli::dispatch(argc, argv, std::cout, std::cerr);
}
