#include <iostream>
#include <string>
#include <vector>

#include "seqbell/cli/app.h"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return seqbell::cli::run_cli(args, std::cout, std::cerr);
}
