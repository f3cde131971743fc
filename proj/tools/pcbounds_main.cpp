#include <iostream>
#include <string>
#include <vector>

#include "pcbounds/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return pcbounds::cli::run(args, std::cin, std::cout, std::cerr);
}
