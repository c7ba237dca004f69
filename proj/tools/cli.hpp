#pragma once

// The qdiff command line: parses arguments, runs one subcommand and maps
// library errors onto the exit-code contract. Output goes to out (or the
// --out file), diagnostics to err.

#include <ostream>
#include <string>
#include <vector>

namespace qdiff::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdiff::cli
