#pragma once

#include <string>

namespace funnel::cli {

// Writes content to path through a temporary file in the same directory and a rename.
// An empty path writes to standard output. Throws ConfigError when the target is not writable.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace funnel::cli
