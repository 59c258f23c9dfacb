#include <iostream>

#include "smk/cli.hpp"

int main(int argc, char** argv) { return smk::cli::run(argc, argv, std::cout, std::cerr); }
