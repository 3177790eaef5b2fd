#include <iostream>

#include "ratiolab/cli.hpp"

int main(int argc, char** argv) { return ratiolab::cli::run(argc, argv, std::cout, std::cerr); }
