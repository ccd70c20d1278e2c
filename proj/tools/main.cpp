#include <string>
#include <vector>

#include "lanemden/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lanemden::cli::run(args);
}
