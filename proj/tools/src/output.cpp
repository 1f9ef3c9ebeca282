#include "funnel_cli/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <system_error>

#include "funnel/errors.hpp"

namespace funnel::cli {

void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("output path '" + path + "' is not writable");
    f << content;
    f.flush();
    if (!f) throw ConfigError("writing '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace funnel::cli
