#include "probent/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return probent::run_cli(argc, argv, std::cout, std::cerr); }
