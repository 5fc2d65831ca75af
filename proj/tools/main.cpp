#include <iostream>

#include "slarag/cli.hpp"

int main(int argc, char** argv) {
    return slarag::run_cli(argc, argv, std::cout, std::cerr);
}
