// Command-line front end (placeholder; full subcommand surface added with the
// classify / reconstruct / verify modules).
#include <cstdio>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::printf("wsurf: command-line interface under construction\n");
    return 0;
}
