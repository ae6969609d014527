#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return roomgreen::cli::run(argc, argv, std::cout, std::cerr); }
