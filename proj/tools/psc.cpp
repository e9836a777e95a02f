// psc: exact homology of classifying spaces of finite abelian p-groups,
// chain-level operations, and positivity certificates for atoral classes.

#include "psc/cli.hpp"

#include <cstdio>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    psc::CliResult r = psc::run_cli(args);
    if (!r.out.empty()) std::fputs(r.out.c_str(), stdout);
    if (!r.err.empty()) std::fputs(r.err.c_str(), stderr);
    return r.code;
}
