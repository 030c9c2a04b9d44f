#include <iostream>

#include "graphfix/cli.hpp"

int main(int argc, char** argv) { return graphfix::cli::run_cli(argc, argv, std::cout, std::cerr); }
