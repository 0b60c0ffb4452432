#include "glab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return glab::cli::main(argc, argv, std::cout, std::cerr); }
