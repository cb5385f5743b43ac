#pragma once

#include <string>
#include <vector>

namespace le::cli {

// Exit codes: 0 success, 1 validation error or bad usage, 2 failed verify suite.
int run(int argc, char** argv);
// args excludes the program name.
int run(const std::vector<std::string>& args);

// "a:b:n" -> n equispaced values from a to b (n = 1 gives a).
std::vector<double> parse_range(const std::string& spec);
// "1.5,2" or "[1.5, 2]" -> values.
std::vector<double> parse_list(const std::string& spec);

// Writes to path.tmp.<pid> and renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace le::cli
