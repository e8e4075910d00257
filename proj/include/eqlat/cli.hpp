#pragma once

#include <ostream>
#include <span>
#include <string>

namespace eqlat::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 when the input is invalid or a witness was found, 2 on usage or parse
/// errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace eqlat::cli
