#include <iostream>

#include "ddfx/cli.hpp"

int main(int argc, char** argv) { return ddfx::run_cli(argc, argv, std::cout, std::cerr); }
