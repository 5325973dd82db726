#include <iostream>

#include "hamdual/cli.hpp"

int main(int argc, char** argv) {
    return hamdual::cli::run(argc, argv, std::cout, std::cerr);
}
