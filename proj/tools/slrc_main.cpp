#include <string>
#include <vector>

#include "slrc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return slrc::cli::run(std::move(args));
}
