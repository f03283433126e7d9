#include "genscatter/cli/commands.hpp"

int main(int argc, char **argv) { return genscatter::cli::run(argc, argv); }
