#include <iostream>

#include "confstrata/cli.hpp"

int main(int argc, char** argv) {
    auto parsed = confstrata::cli::parse_args(argc, argv, std::cout, std::cerr);
    if (!parsed.config) return parsed.exit_code;
    return confstrata::cli::run(*parsed.config, std::cout, std::cerr);
}
