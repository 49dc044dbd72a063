#pragma once

#include <stdexcept>
#include <string>

namespace star {

enum class ErrorCode {
  kMapping,
  kParse,
  kRange,
  kRender,
  kEmptyGroup,
  kAutomaton,
  kDeadEnd,
  kAlignment,
  kIo,
  kConfig,
  kNonFinite,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the core library carries one of the codes above so
// the C layer can translate it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace star
