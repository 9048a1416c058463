#include <iostream>

#include "halfder/cli.hpp"

int main(int argc, char** argv) { return halfder::cli_main(argc, argv, std::cout, std::cerr); }
