#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <system_error>

#include "lpplspec/errors.hpp"

namespace lpplspec {

// Shortest decimal string that round-trips to the same double.  Used by every
// writer so that repeated runs produce byte-identical files.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Strict double parser: the whole token must be consumed.
inline double parse_double(const std::string& s, const std::string& what) {
  if (s.empty()) throw DataError(what + ": empty number");
  const char* b = s.data();
  const char* e = s.data() + s.size();
  double v = 0.0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw DataError(what + ": cannot parse number '" + s + "'");
  return v;
}

inline long parse_long(const std::string& s, const std::string& what) {
  if (s.empty()) throw DataError(what + ": empty integer");
  const char* b = s.data();
  const char* e = s.data() + s.size();
  long v = 0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw DataError(what + ": cannot parse integer '" + s + "'");
  return v;
}

}  // namespace lpplspec
