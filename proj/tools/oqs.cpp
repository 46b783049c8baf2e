#include <iostream>

#include "oqs/cli.hpp"

int main(int argc, char** argv) { return oqs::run_cli(argc, argv, std::cout, std::cerr); }
