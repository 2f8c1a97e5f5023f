#include "cli_commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return ncst::cli::run(argc, argv, std::cout, std::cerr); }
