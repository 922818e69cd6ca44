#pragma once

#include <stdexcept>
#include <string>

namespace ssdnn {

/// Malformed configuration or a violated precondition on user input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unparseable or inconsistent data (CSV rows, dimension mismatches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training diverged or a numerical routine could not produce a finite answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two raw bias averages cannot be fitted by a single power law
/// (zero or opposite signs).
class NoPowerLawFit : public NumericalError {
 public:
  NoPowerLawFit(double b1_hat, double b2_hat);

  double b1_hat() const noexcept { return b1_hat_; }
  double b2_hat() const noexcept { return b2_hat_; }

 private:
  double b1_hat_;
  double b2_hat_;
};

}  // namespace ssdnn
