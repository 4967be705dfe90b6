#include <iostream>

#include "lmgeo/cli.hpp"

int main(int argc, char** argv) { return lmgeo::run_cli(argc, argv, std::cout, std::cerr); }
