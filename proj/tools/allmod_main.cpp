#include <iostream>
#include <string>
#include <vector>

#include "allmod/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return allmod::cli::run(args, std::cout, std::cerr);
}
