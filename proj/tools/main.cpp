#include <iostream>

#include "metatomo/cli.hpp"

int main(int argc, char** argv) { return metatomo::cli::run(argc, argv, std::cout, std::cerr); }
