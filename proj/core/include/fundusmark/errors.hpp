#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fundusmark {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree (planes of different size, payload vs. mask).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Rectangle or index outside its host image.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its documented domain (even Wiener window, k < 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but carries no usable signal: constant image for
// Otsu, zero-variance sequence for Pearson, too few points for a conic.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// A localization stage failed; stage() names it for diagnostics.
class LocalizationError : public Error {
 public:
  LocalizationError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class ReadError : public Error {
 public:
  using Error::Error;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

class SidecarError : public Error {
 public:
  using Error::Error;
};

}  // namespace fundusmark
