#include <iostream>

#include "conic_shubin/cli.hpp"

int main(int argc, char** argv) { return conic_shubin::run_cli(argc, argv, std::cout, std::cerr); }
