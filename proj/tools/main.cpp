#include "cli.hpp"

int main(int argc, char** argv) { return bumpdirac::cli::main_entry(argc, argv); }
