#include <iostream>
#include <string>
#include <vector>

#include "latentpack/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return latentpack::run_cli(args, std::cout, std::cerr);
}
