#ifndef LDGM_CLI_HPP
#define LDGM_CLI_HPP

#include <string>
#include <vector>

namespace ldgm {

/// Command-line front end. Subcommands: gen, split, encode, decode,
/// simulate, bounds, de, capacity. Returns the process exit code and prints
/// a one-line diagnostic to stderr on failure.
int cli_dispatch(const std::vector<std::string> &args);

} // namespace ldgm

#endif
