#include "conga/cli/commands.hpp"

int main(int argc, char** argv) { return conga::cli::run(argc, argv); }
