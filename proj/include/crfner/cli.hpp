#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Batch command-line entry points. Each takes the arguments that follow
// the subcommand name and returns the process exit code:
//   0 success, 1 runtime failure, 2 usage or configuration error.
namespace crfner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_tag(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_eval(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_stats(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches `crfner <subcommand> ...`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace crfner::cli
