#pragma once

// Command-line front end, exposed as a library function so tests can drive
// it without spawning processes.
//
// Exit codes: 0 = ran to completion (Unknown verdicts allowed), 1 = usage or
// parse error, 2 = internal invariant violation (an oracle mismatch in the
// gallery; must never occur).

#include <iosfwd>
#include <string>
#include <vector>

namespace crlp {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crlp
