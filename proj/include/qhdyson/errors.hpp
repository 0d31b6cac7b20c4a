#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhdyson {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NonFiniteEntry,
  DefectiveMatrix,
  NotPositiveDefinite,
  SingularInput,
  NotHermitian,
  ComplexSpectrum,
  SingularScaling,
  NotUnitary,
  AvatarNotHermitian,
  NotQuasiHermitian,
  NotHermitianGenerator,
  EPRegion,
  InvalidCoupling,
  SingularDysonMap,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above; the CLI
// maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qhdyson
