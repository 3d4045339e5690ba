#include <iostream>

#include "lexiport/cli.h"

int main(int argc, char** argv) { return lexiport::cli::run(argc, argv, std::cout, std::cerr); }
