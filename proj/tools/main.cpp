#include <iostream>

#include "sntp/cli.hpp"

int main(int argc, char** argv) { return sntp::cli::run(argc, argv, std::cout, std::cerr); }
