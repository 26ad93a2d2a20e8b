#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace atomdeconv::cli {

//! Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

//! Runs the command line `args` (args[0] is the program name). Primary output
//! goes to the files named by --output (stdout for "-"); errors are reported
//! as one line "error: code=<Code> message=\"...\"" on `err`.
int
run(const std::vector<std::string>& args, std::ostream& err);

int
run(const std::vector<std::string>& args);

} // namespace atomdeconv::cli
