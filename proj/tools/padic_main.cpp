#include <iostream>

#include "padic_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return padic::cli::run(std::move(args), std::cout, std::cerr);
}
