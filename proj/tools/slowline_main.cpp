#include "cli_io.hpp"

int main(int argc, char** argv) { return slowline::cli::main_entry(argc, argv); }
