#include <iostream>
#include <string>
#include <vector>

#include "qmark/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const qmark::cli::CommandResult r = qmark::cli::dispatch(args);
    (r.ok ? std::cout : std::cerr) << qmark::cli::render(r);
    return r.exit_code;
}
