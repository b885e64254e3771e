#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace crowdprice {

/// Malformed input or configuration. CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation. CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Instance exceeds an enumeration or oracle limit. CLI exit code 3.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A postcondition that must hold by construction was violated. CLI exit code 4.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Neumaier compensated summation. Budget comparisons use the compensated
/// value with a plain `<=`, never a tolerance.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// a <= b up to a relative tolerance scaled by max(1, |a|, |b|).
inline bool leq_tol(double a, double b, double tau) {
  const double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
  return a <= b + tau * scale;
}

}  // namespace crowdprice
