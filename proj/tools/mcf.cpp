#include <iostream>

#include "mcf/cli.hpp"

int main(int argc, char** argv) { return mcf::run_cli(argc, argv, std::cout, std::cerr); }
