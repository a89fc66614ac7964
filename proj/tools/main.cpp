#include <iostream>

#include "dqd/cli.hpp"

int main(int argc, char** argv) { return dqd::run_cli(argc, argv, std::cout, std::cerr); }
