#pragma once

#include <stdexcept>
#include <string>

namespace patchdg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A geometric resolution assumption on mesh vs. interface failed.
/// `which()` is 1 (a face is crossed more than once) or 2 (a cut element has
/// no interior Moore neighbour on some side).
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(int which, const std::string& what)
      : Error("assumption " + std::to_string(which) + " violated: " + what), which_(which) {}
  int which() const noexcept { return which_; }

 private:
  int which_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class EmptyRegion : public Error {
 public:
  using Error::Error;
};

class DegenerateGradient : public Error {
 public:
  using Error::Error;
};

class PatchTooSmall : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(long pivot_index, double pivot)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot_index) + " = " +
              std::to_string(pivot)),
        index_(pivot_index),
        pivot_(pivot) {}
  long pivot_index() const noexcept { return index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  long index_;
  double pivot_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NonMonotoneH : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace patchdg
