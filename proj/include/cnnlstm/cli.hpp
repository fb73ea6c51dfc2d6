#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cnnlstm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `cnnlstm` tool. args[0] is the program name.
/// Subcommands: stats, tokenize, train, evaluate, gradcheck.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cnnlstm::cli
