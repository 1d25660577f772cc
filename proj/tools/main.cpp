#include <iostream>

#include "spectail/cli.hpp"

int main(int argc, char** argv) { return spectail::cli::dispatch(argc, argv, std::cout, std::cerr); }
