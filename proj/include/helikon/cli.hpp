#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helikon/solver.hpp"

namespace helikon::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_math = 2;

/// Solution document written by `solve`.
std::string solution_document(const Solution& s);

/// CSV written by `sweep`: a version comment, the header, one row per cell.
std::string sweep_document(const std::vector<SweepRow>& rows);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace helikon::cli
