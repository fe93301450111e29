#include "dqm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dqm::cli::run(argc, argv, std::cout, std::cerr); }
