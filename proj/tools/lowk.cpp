#include <iostream>

#include "lowk/cli.hpp"

int main(int argc, char** argv) { return lowk::cli::run(argc, argv, std::cout, std::cerr); }
