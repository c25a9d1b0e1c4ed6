#pragma once

#include <stdexcept>
#include <string>

namespace sno::detail {

// Contract violations raise std::invalid_argument; numeric failures
// (divergence, NaN) raise std::runtime_error at the point of detection.
inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void numeric_check(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

}  // namespace sno::detail
