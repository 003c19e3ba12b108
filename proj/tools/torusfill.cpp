#include <iostream>
#include <string>
#include <vector>

#include "torusfill/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return torusfill::cli::run_command(args, std::cout, std::cerr);
}
