#include <iostream>

#include "lagerstrom/cli.hpp"

int main(int argc, char** argv) { return lagerstrom::cli::run(argc, argv, std::cout, std::cerr); }
