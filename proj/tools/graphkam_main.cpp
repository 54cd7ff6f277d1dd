#include <iostream>

#include "graphkam/spec_io.hpp"

int main(int argc, char** argv) {
    return graphkam::run_command(argc, argv, std::cout, std::cerr);
}
