#include "commands.hpp"

int main(int argc, char** argv) { return phonon_chill::cli::run_cli(argc, argv); }
