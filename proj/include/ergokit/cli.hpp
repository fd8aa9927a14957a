#pragma once

#include <iosfwd>

namespace ergokit {

// Parses argv, runs one command, and writes the serialized payload to `out`
// (or the file given via --output). Validation failures print a single-line
// JSON error to `err` and return 1; a failed verify suite returns 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergokit
