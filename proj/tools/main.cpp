#include "aldecomp/cli_commands.hpp"

int main(int argc, char** argv) { return aldecomp::run_cli(argc, argv); }
