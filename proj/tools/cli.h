#ifndef UNIRANK_TOOLS_CLI_H_
#define UNIRANK_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace unirank::cli {

// Exit codes: 0 success, 1 internal error, 2 usage or input error.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Runs `unirank <args...>`; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace unirank::cli

#endif  // UNIRANK_TOOLS_CLI_H_
