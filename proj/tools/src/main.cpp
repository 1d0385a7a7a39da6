#include <iostream>

#include "firesquad/cli.hpp"

int main(int argc, char **argv) { return firesquad::run_cli(argc, argv, std::cout, std::cerr); }
