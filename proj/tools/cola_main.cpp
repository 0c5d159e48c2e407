#include "cola/cli/cli.hpp"

int main(int argc, char** argv) { return cola::cli::run_cli(argc, argv); }
