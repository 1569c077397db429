#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shexatlas {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kParseError = 1;    // ShExC syntax, malformed spec or CSV
inline constexpr int kIoError = 2;
inline constexpr int kUnknownNode = 3;   // also unknown / unrecognized entity
inline constexpr int kNetworkError = 4;  // Wikidata lookup failed or disabled
inline constexpr int kUsage = 64;
}  // namespace exit_code

/// Entry point of the shex-atlas command line; `args` excludes the program
/// name. Documents go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shexatlas
