#include "cli.hpp"

int main(int argc, char** argv) { return depoisson::cli::main_entry(argc, argv); }
