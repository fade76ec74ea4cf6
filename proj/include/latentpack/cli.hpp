#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latentpack {

// Exit codes: 0 ok, 1 pipeline error, 2 usage/IO error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latentpack
