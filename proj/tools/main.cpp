#include <iostream>

#include "pmet/cli.hpp"

int main(int argc, char** argv) { return pmet::cli_main(argc, argv, std::cout, std::cerr); }
