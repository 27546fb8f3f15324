#include <iostream>

#include "anholo/cli/app.hpp"

int main(int argc, char** argv) { return anholo::cli::run_cli(argc, argv, std::cout, std::cerr); }
