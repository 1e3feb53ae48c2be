#pragma once

#include <stdexcept>
#include <string>

namespace hogkit {

// Values mirror hk_status in hogkit.h.
enum class ErrorCode {
  kArgument = 1,
  kIo = 2,
  kDecode = 3,
  kSize = 4,
  kEmptyGrid = 5,
  kAnnotation = 6,
  kDegenerate = 7,
  kFormat = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hogkit
