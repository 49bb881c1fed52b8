#include <iostream>

#include "roughnum_cli/run.hpp"

int main(int argc, char** argv) { return roughnum::cli::run_main(argc, argv, std::cout, std::cerr); }
