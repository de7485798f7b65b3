#ifndef SKEWALG_CLI_HPP
#define SKEWALG_CLI_HPP

namespace skewalg {

/// Command dispatch for the skewalg binary. Exit codes: 0 success,
/// 1 mathematical failure (a verified identity or check is violated),
/// 2 usage / IO / schema errors.
int run_cli(int argc, char** argv);

} // namespace skewalg

#endif
