#include <string>
#include <vector>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    return bomgene::cli::run_cli(std::vector<std::string>(argv, argv + argc));
}
