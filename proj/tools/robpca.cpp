#include <iostream>

#include "robpca/cli.hpp"

int main(int argc, char** argv) { return robpca::cli::run(argc, argv, std::cout, std::cerr); }
