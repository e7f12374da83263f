#include "lpplab_cli/cli.hpp"

int main(int argc, char** argv) {
    return lpplab::cli::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
