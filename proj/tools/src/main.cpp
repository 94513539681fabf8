#include "fracqm/cli/commands.hpp"

int main(int argc, char** argv) { return fracqm::cli::run_cli(argc, argv); }
