#include <iostream>
#include <string>
#include <vector>

#include "tanglesim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    tanglesim::cli::RunRequest req;
    try {
        req = tanglesim::cli::parse_args(args);
    } catch (const tanglesim::cli::UsageError& e) {
        if (e.help()) {
            std::cout << e.what();
            return 0;
        }
        std::cerr << "usage error: " << e.what() << "\n"
                  << "try: tanglesim run --help\n";
        return 1;
    }
    return tanglesim::cli::execute(req, std::cerr);
}
