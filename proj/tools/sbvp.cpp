#include "sbvp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return sbvp::cli::main(args, std::cout, std::cerr);
}
