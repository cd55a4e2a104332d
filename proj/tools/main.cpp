#include <iostream>

#include "smalldiv/cli.hpp"

int main(int argc, char** argv) {
    return smalldiv::cli::run(argc, argv, std::cout, std::cerr);
}
