#pragma once

#include <charconv>
#include <string>

namespace fragtree {

/// Shortest decimal that reads back to the same double.
inline std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace fragtree
