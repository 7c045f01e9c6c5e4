#pragma once

#include <stdexcept>
#include <string>

namespace shortcode {

/// Thrown when an exact computation would exceed its enumeration cap.
/// The message names the offending count so callers can report it.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed input files; carries the 1-based line number.
class format_error : public std::runtime_error {
 public:
  format_error(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace shortcode
