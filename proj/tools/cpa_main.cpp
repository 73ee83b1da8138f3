#include <iostream>

#include "cpa/cli_io.hpp"

int main(int argc, char** argv) { return cpa::cli_main(argc, argv, std::cout, std::cerr); }
