#include "divpow/cli.hpp"

int main(int argc, char** argv) { return divpow::cli::run(argc, argv); }
