#include "cli.hpp"

int main(int argc, char** argv) {
    return pathembed::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
