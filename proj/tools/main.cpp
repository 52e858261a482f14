#include <iostream>
#include <string>
#include <vector>

#include "rmtx/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return rmtx::cli::run(args, std::cout, std::cerr);
}
