#include <iostream>

#include "fbp/cli.hpp"

int main(int argc, char** argv) { return fbp::cli::run(argc, argv, std::cout, std::cerr); }
