#include <iostream>

#include "strand/cli.hpp"

int main(int argc, char** argv) { return strand::cli_main(argc, argv, std::cout, std::cerr); }
