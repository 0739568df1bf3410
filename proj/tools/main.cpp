#include <iostream>

#include "superjet/cli.hpp"

int main(int argc, char** argv) { return superjet::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
