#include <iostream>

#include "ecoloom/cli.hpp"

int main(int argc, char** argv) { return ecoloom::cli::main(argc, argv, std::cout, std::cerr); }
