#pragma once

#include <iosfwd>

namespace qecc::cli {

/// Full command-line front end. Tables go to --out (or `out`), the one-line
/// summary to `out` when --out is set and to `err` otherwise. Returns 0, 1 on
/// a numerical domain error, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qecc::cli
