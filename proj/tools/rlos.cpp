#include "rlos/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rlos::cli::run(argc, argv, std::cout, std::cerr); }
