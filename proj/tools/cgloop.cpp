#include "cgloop/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cgloop::run_cli(argc, argv, std::cout, std::cerr); }
