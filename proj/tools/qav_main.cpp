#include "cli/app.hpp"

int main(int argc, char** argv) { return qav::cli::run_cli(argc, argv); }
