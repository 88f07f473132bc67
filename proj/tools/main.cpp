#include <iostream>
#include <string>
#include <vector>

#include "tracekit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tracekit::run_cli(args, std::cout, std::cerr);
}
