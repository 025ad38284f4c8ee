#ifndef GRAPHSTEIN_CLI_HPP
#define GRAPHSTEIN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace graphstein {

// Command-line front end. Exit codes: 0 success (or "accept" for `test`),
// 1 statistical reject / failed verification, 2 usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphstein

#endif
