#include <iostream>
#include <string>
#include <vector>

#include "yeast/cli.hpp"

int main(int argc, char** argv) {
  return yeast::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
