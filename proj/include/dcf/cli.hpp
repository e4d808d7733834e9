#pragma once

/// @file cli.hpp
/// Command-line front end: factor, verify, sweep, stats, monotone.
///
/// Exit codes: 0 on success with every verdict pass or na; 1 when a fail or
/// borderline verdict (or a method disagreement) was produced; 2 on usage or
/// i/o errors. JSON goes to `out`, human-readable summaries to `err`.

#include <iosfwd>
#include <string>
#include <vector>

namespace dcf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dcf::cli
