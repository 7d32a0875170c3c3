#include "polybloch/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return polybloch::cli::run(argc, argv, std::cout, std::cerr);
}
