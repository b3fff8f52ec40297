#pragma once

namespace qav::cli {

// Parses argv, dispatches to a subcommand, and maps failures onto the exit
// contract: 0 success, 2 protocol abort, 3 bad configuration, 4 internal
// invariant violation.
int run_cli(int argc, char** argv);

}  // namespace qav::cli
