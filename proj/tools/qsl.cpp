#include <iostream>
#include <string>
#include <vector>

#include "qsl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qsl::cli::run(args, std::cout, std::cerr);
}
