#include "cataplex/cli.hpp"

int main(int argc, char** argv) { return cataplex::cli::main_entry(argc, argv); }
