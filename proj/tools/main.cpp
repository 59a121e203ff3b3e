#include <iostream>
#include <string>
#include <vector>

#include "chreduct/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return chreduct::cli::run(args, std::cout, std::cerr);
}
