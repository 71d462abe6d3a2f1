#include <iostream>

#include "pcnap/cli.hpp"

int main(int argc, char** argv) {
    return pcnap::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
