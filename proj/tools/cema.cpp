#include <iostream>

#include "cema/cli.hpp"

int main(int argc, char** argv) { return cema::run_cli(argc, argv, std::cout, std::cerr); }
