#include <iostream>
#include <string>
#include <vector>

#include "truecon/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return truecon::cli::run(args, std::cout, std::cerr, std::cin);
}
