#include <string>
#include <vector>

#include "pdg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pdg::run_cli(args);
}
