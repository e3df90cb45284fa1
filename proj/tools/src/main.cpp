#include <iostream>

#include "orfsim/cli.hpp"

int main(int argc, char** argv) {
    return orfsim::cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
