#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcbounds::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;             // bad flags, unparseable or invalid input
inline constexpr int inconsistent = 3;      // experimental/observational data conflict
inline constexpr int point_identified = 4;  // no study needed, PNS already a point
inline constexpr int gain_equality = 5;     // sigma = 0, benefit is the point W
inline constexpr int output = 6;            // unwritable output path
inline constexpr int oracle_failure = 7;    // oracle-check found a deviation
}  // namespace exit_code

/// Run the command line given argv-style arguments (program name excluded).
/// All I/O goes through the supplied streams; never throws and never
/// terminates the process, so it is safe to drive in-process.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace pcbounds::cli
