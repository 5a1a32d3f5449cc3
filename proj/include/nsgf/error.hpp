#pragma once

#include <stdexcept>
#include <string>

namespace nsgf {

/// Error categories map onto the CLI exit-code contract.
enum class ErrorKind {
  config,  // malformed input, invalid parameters, shape mismatches
  frame,   // frame condition or covering gap
  io,      // unreadable or unwritable files
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) {
  return Error(ErrorKind::config, what);
}
inline Error frame_error(const std::string& what) {
  return Error(ErrorKind::frame, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::io, what);
}

}  // namespace nsgf
