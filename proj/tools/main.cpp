#include <iostream>

#include "limitset/cli.hpp"

int main(int argc, char** argv) { return limitset::run_cli(argc, argv, std::cout, std::cerr); }
