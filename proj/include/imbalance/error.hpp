#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imbalance {

enum class Errc {
  InvalidInput,
  DegenerateRatio,
  InvalidConfig,
  SingularSystem,
  NoChain,
  TooLarge,
  EmptyInput,
  AllZero,
  ConfigMismatch,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::DegenerateRatio: return "DegenerateRatio";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NoChain: return "NoChain";
    case Errc::TooLarge: return "TooLarge";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::AllZero: return "AllZero";
    case Errc::ConfigMismatch: return "ConfigMismatch";
  }
  return "Unknown";
}

// Domain failure raised by the engine. The code is what callers branch on;
// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace detail
}  // namespace imbalance
