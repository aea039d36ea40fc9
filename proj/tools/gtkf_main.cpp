#include <iostream>

#include "gtkf/cli.hpp"

int main(int argc, char** argv) { return gtkf::cli_main(argc, argv, std::cout, std::cerr); }
