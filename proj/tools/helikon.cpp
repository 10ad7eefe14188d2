#include <iostream>

#include "helikon/cli.hpp"

int main(int argc, char** argv) {
    try {
        return helikon::cli::run(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
