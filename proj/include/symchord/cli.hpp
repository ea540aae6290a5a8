#pragma once

#include <string>
#include <vector>

namespace symchord {

/// Command-line front end. Subcommands: find-chord, continue, scan, index,
/// tau-table, homology, verify. Exit codes: 0 ok, 2 config error,
/// 3 numerical failure, 4 expectation violated. All artifacts are assembled
/// in memory and written once at the end, so failed runs leave no partial files.
int run_cli(const std::vector<std::string>& args);

}  // namespace symchord
