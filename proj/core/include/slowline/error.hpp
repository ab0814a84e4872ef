#pragma once

#include <stdexcept>
#include <string>

namespace slowline {

// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_argument : public error {
 public:
  using error::error;
};

// A root or minimum could not be bracketed; the message carries the searched interval.
class no_root : public error {
 public:
  using error::error;
};

class convergence_error : public error {
 public:
  using error::error;
};

}  // namespace slowline
