#include "fireline_cli/commands.hpp"

int main(int argc, char** argv) { return fireline::cli::cli_main(argc, argv); }
