#include <iostream>
#include <string>
#include <vector>

#include "emocorpus/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return emocorpus::run_cli(args, std::cout, std::cerr);
}
