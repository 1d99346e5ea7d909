#include <iostream>

#include "scgtf/cli.hpp"

int main(int argc, char** argv) { return scgtf::run_cli(argc, argv, std::cout, std::cerr); }
