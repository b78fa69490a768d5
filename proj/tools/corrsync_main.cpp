#include "corrsync/cli/runners.hpp"

int main(int argc, char** argv) { return corrsync::cli::main_entry(argc, argv); }
