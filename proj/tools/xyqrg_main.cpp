// Entry point for the xyqrg command-line tool.
#include "xyqrg/commands.hpp"

int main(int argc, char** argv) { return xyqrg::run_cli(argc, argv); }
