#include <iostream>

#include "downcross/cli.hpp"

int main(int argc, char** argv) { return downcross::cli::run(argc, argv, std::cout, std::cerr); }
