#include <iostream>

#include "dualcorr/cli.hpp"

int main(int argc, char** argv) { return dualcorr::cli::main_entry(argc, argv, std::cout, std::cerr); }
