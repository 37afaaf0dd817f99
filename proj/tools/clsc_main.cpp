#include <iostream>

#include "clsc/cli.hpp"

int main(int argc, char** argv) { return clsc::run_cli(argc, argv, std::cout, std::cerr); }
