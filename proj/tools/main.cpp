#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return sfd::cli::run(argc, argv, std::cout); }
