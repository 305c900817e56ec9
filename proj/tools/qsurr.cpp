#include <iostream>

#include "qsurr/cli.hpp"

int main(int argc, char** argv) { return qsurr::cli::run(argc, argv, std::cout, std::cerr); }
