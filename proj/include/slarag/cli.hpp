#pragma once

#include <iosfwd>

namespace slarag {

// Exit codes: 0 ok, 1 runtime failure, 2 bad config or usage, 3 infeasible SLA.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace slarag
