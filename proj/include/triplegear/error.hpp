#pragma once

#include <stdexcept>
#include <string>

namespace tg {

enum class ErrorCode {
  InvalidInput,
  OffSurface,
  NearSingular,
  Infeasible,
  ContactCount,
  InvalidProfile,
  OffsetTooLarge,
  Ambiguity,
  FitFailure,
  DegenerateTooth,
  NonWatertight,
  AxleImpossible,
  InvalidSpacing,
  NoContact,
  Parse,
  TooLarge,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tg
