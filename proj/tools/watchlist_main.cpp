#include <iostream>

#include "watchlist/commands.hpp"

int main(int argc, char** argv) { return watchlist::run_cli(argc, argv, std::cout, std::cerr); }
