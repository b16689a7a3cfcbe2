#ifndef DDFX_CLI_HPP
#define DDFX_CLI_HPP

#include <ostream>

namespace ddfx {

// Runs one command line. Returns 0 on success, 1 on a domain error (one
// "error: E_CODE: message" line on err) and 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddfx

#endif  // DDFX_CLI_HPP
