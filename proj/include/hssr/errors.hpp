#pragma once

#include <stdexcept>
#include <string>

namespace hssr {

// Mismatched or inconsistent tensor dimensions.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed, truncated, or otherwise unreadable on-disk data.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hssr
