#include <iostream>

#include "leafbench/cli.hpp"

int main(int argc, char** argv) { return leafbench::run_cli(argc, argv, std::cout, std::cerr); }
