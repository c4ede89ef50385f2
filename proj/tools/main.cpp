#include <iostream>

#include "pgarch/cli.hpp"

int main(int argc, char** argv) { return pgarch::cli::run(argc, argv, std::cout, std::cerr); }
