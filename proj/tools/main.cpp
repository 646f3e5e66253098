#include "sswim/cli.hpp"

int main(int argc, char** argv) { return sswim::cli::run(argc, argv); }
