#include "lpa/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return lpa::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
