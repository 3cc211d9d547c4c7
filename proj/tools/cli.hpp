#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cinet::cli {

// Runs one command line (without the program name). Returns 0 on success,
// 1 on a domain error and 2 on a usage error; errors are reported as a
// single-line JSON object on `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace cinet::cli
