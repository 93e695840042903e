#include <string>
#include <vector>

#include "fcfsalis/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fcfsalis::cli::run_cli(args);
}
