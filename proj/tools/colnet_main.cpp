#include "colnet/cli.hpp"

int main(int argc, char** argv) { return colnet::cli::run_cli(argc, argv); }
