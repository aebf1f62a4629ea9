#pragma once

#include <stdexcept>
#include <string>

namespace mwdg {

enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  Io = 3,
  Unstable = 4,
  Unsupported = 5,
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace mwdg
