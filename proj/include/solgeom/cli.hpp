#pragma once

// Command-line front end. `args` excludes the program name. Data goes to
// `out` (or the --out file), diagnostics to `err`. Exit codes: 0 success,
// 2 argument error, 3 solver, integration or I/O failure.

#include <iosfwd>
#include <span>
#include <string>

namespace solgeom::cli {

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace solgeom::cli
