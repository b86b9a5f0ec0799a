#include "commands.hpp"

int main(int argc, char** argv) { return gwshm::cli::run_cli(argc, argv); }
