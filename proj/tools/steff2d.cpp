#include <iostream>
#include <string>
#include <vector>

#include "steff2d/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return steff2d::cli::run(args, std::cout, std::cerr);
}
