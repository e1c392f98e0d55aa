#include <iostream>

#include "peerturbo/cli.hpp"

int main(int argc, char** argv) { return peerturbo::cli::run(argc, argv, std::cout, std::cerr); }
