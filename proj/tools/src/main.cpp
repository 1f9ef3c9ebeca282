#include "funnel_cli/commands.hpp"

int main(int argc, char** argv) { return funnel::cli::run_cli(argc, argv); }
