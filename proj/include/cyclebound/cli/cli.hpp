#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclebound::cli {

enum ExitCode : int {
    ok = 0,
    inequality_violated = 2,
    inconclusive = 3,
    usage = 64,
    bad_argument = 65,
};

// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cyclebound::cli
