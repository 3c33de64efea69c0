#include "nkbench/cli.hpp"

int main(int argc, char** argv) { return nkbench::cli::run(argc, argv); }
