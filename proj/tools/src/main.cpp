#include "strpend/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return strpend::run_cli(argc, argv, std::cout, std::cerr);
}
