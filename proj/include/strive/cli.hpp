#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace strive {

// Entry point behind the `strive` executable. `args` excludes the program
// name. Data goes to `out`, diagnostics to `err`; returns the exit status.
//
//   strive run CONFIG [--seed N] [--out PATH]
//   strive variants --mode MODE [--frames F | --embeddings FILE] [--budget K]
//                   [--variants M] [--tau T] [--window W] [--seed N]
//   strive score FILE
//   strive check [--seed N] [--inject-fault NAME]
//
// STRIVE_SEED supplies the seed when --seed is absent.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strive
