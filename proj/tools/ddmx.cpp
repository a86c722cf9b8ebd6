#include "ddmx/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ddmx::cli::run(args);
}
