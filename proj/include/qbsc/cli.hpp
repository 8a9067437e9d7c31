#ifndef QBSC_CLI_HPP
#define QBSC_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qbsc/adversary.hpp"

namespace qbsc {

/// Parses reals with power literals: `2^-10` means exactly 2 to the -10, so
/// reports never pick up decimal-rounding drift.
double parse_real(const std::string& text);

/// Loads a scheme from a preset name (`bb84`) or `file:<path>`.
EncodingScheme scheme_from_source(const std::string& source);
/// Loads a code from a compact spec (`rep:q=4,N=3`) or `file:<path>`.
QaryCode code_from_source(const std::string& source);

/// Messages `0.1,2.3` -> {{0,1},{2,3}}; strings split on `,`, symbols on `.`.
std::vector<Message> parse_messages(const std::string& text);

/// Subcommand router. Returns 0 on success, 2 on usage or configuration
/// errors, 3 when a requested audit found a property violation.
int dispatch(const std::vector<std::string>& args);

} // namespace qbsc

#endif
