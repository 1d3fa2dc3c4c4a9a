#pragma once

#include <string>
#include <vector>

namespace ccrlab::cli {

// Dispatches the subcommands (verify, spectrum, butterfly, kms, sample,
// classical, fourier-check). Returns 0 on success, 1 when verification
// fails, 2 on usage or input errors.
int run(std::vector<std::string> args);
int run(int argc, char** argv);

}  // namespace ccrlab::cli
