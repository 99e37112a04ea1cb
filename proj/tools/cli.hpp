#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logdens::cli {

//! Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_bad_input = 1;
inline constexpr int exit_estimation = 2;

//! Runs the command line `args` (without the program name). Results go to
//! `out` unless an output file is named; diagnostics and progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

//! Parses observations, one per line; blank lines and '#' comments are
//! skipped. Throws logdens::Error(config) with the line number on bad input.
std::vector<double> parse_observations(std::istream& in);

} // namespace logdens::cli
