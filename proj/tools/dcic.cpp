#include "dcic/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dcic::cli::run(argc, argv, std::cout, std::cerr); }
