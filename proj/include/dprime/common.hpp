#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace dprime {

using Complex = std::complex<double>;

// Every precondition violation in the library is reported with this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input (config, CSV, target parameters). The CLI maps it to exit 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dprime
