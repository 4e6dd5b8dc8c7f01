#include <iostream>
#include <string>
#include <vector>

#include "angenent_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return angenent::cli::run(args, std::cout, std::cerr);
}
