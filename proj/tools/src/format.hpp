#pragma once

#include <charconv>
#include <string>

namespace funnel::cli {

// 17 significant digits, independent of the locale.
inline std::string fmt17(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

}  // namespace funnel::cli
