#include <iostream>

#include "wheelsim/cli.hpp"

int main(int argc, char** argv) { return wheelsim::cli::run(argc, argv, std::cout, std::cerr); }
