#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emocorpus {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point behind the `emocorpus` executable. `args` excludes the
/// program name. Returns 0 on success, 1 on usage/validation/pairing
/// errors and 2 on I/O or oracle-unreachable errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emocorpus
