#include "thermoscale/cli.hpp"

int main(int argc, char** argv) { return thermoscale::cli::run_cli(argc, argv); }
