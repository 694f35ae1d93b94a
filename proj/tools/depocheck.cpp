#include <iostream>

#include "depocheck/cli.hpp"

int main(int argc, char** argv) { return depocheck::run_cli(argc, argv, std::cout, std::cerr); }
