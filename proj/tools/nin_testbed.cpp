#include <iostream>

#include "nin/gateway/cli.hpp"

int main(int argc, char** argv) { return nin::gateway::run_cli(argc, argv, std::cout, std::cerr); }
