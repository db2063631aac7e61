#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dislo {

/// Exit codes: 0 success, 1 bound violation or solver failure, 2 invalid input.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace dislo
