#include <iostream>

#include "fdde/cli.hpp"

int main(int argc, char** argv) { return fdde::cli::run_cli(argc, argv, std::cout, std::cerr); }
