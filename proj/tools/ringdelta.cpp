#include <iostream>
#include <string>
#include <vector>

#include <ringdelta/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ringdelta::cli::run(args, std::cout, std::cerr);
}
