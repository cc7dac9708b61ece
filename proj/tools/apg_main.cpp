#include <string>
#include <vector>

#include "apg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return apg::cli::dispatch(args);
}
