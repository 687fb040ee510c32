#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cuetrack {

// Base class for all library errors. `code()` is a stable identifier used by
// the CLI for machine-parseable diagnostics and exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define CUETRACK_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

CUETRACK_DEFINE_ERROR(NonOrthonormalInput);
CUETRACK_DEFINE_ERROR(DegenerateJoints);
CUETRACK_DEFINE_ERROR(DegenerateTrajectory);
CUETRACK_DEFINE_ERROR(EmptyTrajectory);
CUETRACK_DEFINE_ERROR(NoCueAvailable);
CUETRACK_DEFINE_ERROR(EmptyCloud);
CUETRACK_DEFINE_ERROR(MissingPair);
CUETRACK_DEFINE_ERROR(MissingFrame);
CUETRACK_DEFINE_ERROR(BehindCamera);
CUETRACK_DEFINE_ERROR(TooFewFrames);
CUETRACK_DEFINE_ERROR(NoCommonFrames);
CUETRACK_DEFINE_ERROR(AnchorOutOfRange);
CUETRACK_DEFINE_ERROR(SchemaError);
CUETRACK_DEFINE_ERROR(RangeError);
CUETRACK_DEFINE_ERROR(ConfigError);

#undef CUETRACK_DEFINE_ERROR

// Raised by registration when a cloud has too few points to estimate a
// rotation; carries which side failed and its point count.
class InsufficientPoints : public Error {
 public:
  InsufficientPoints(std::string side, long count, const std::string& what)
      : Error("InsufficientPoints", what), side_(std::move(side)), count_(count) {}

  const std::string& side() const noexcept { return side_; }
  long count() const noexcept { return count_; }

 private:
  std::string side_;
  long count_;
};

}  // namespace cuetrack
