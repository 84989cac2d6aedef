#pragma once

#include <stdexcept>
#include <string>

namespace egosim {

// Error taxonomy. The CLI maps io/invalid_input/not_found to the input-error
// exit code and invalid_pair/undefined_value to the computation-error code.
enum class errc {
  io,               // unreadable or malformed file / stream failure
  invalid_input,    // bad argument, inconsistent sizes, duplicate labels, ...
  invalid_pair,     // i == j where a proper pair is required
  not_found,        // unknown entity, missing embedding
  undefined_value,  // result undefined for these inputs (zero variance, ...)
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace egosim
