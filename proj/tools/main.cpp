#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  return prcg_cli::run(std::vector<std::string>(argv, argv + argc), std::cerr);
}
