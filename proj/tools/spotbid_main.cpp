#include <vector>

#include "spotbid/cli_io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spotbid::run_command(args);
}
