#include <vector>

#include "dcfcap/cli.hpp"

int main(int argc, char** argv) {
    return dcfcap::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
