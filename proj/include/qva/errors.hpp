#pragma once

#include <stdexcept>
#include <string>

namespace qva {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InversionOfNonUnit : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct UntrustedProduct : Error { using Error::Error; };
struct ResidueOutsideWindow : Error { using Error::Error; };
struct WindowTooSmall : Error { using Error::Error; };
struct NoWitnessUpTo : Error {
  explicit NoWitnessUpTo(int max_n)
      : Error("no locality witness up to N=" + std::to_string(max_n)), max_n(max_n) {}
  int max_n;
};
struct NotLocal : Error { using Error::Error; };
struct CutoffTooLarge : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ParseError : Error {
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

}  // namespace qva
