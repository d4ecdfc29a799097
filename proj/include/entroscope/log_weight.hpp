#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <span>

namespace entroscope {

/// Nonnegative real number held as its natural logarithm.
///
/// Probabilities of long strings underflow quickly in linear space, so every
/// probability and density in the library travels as a LogWeight. Negative
/// infinity encodes zero; NaN is rejected at construction.
class LogWeight {
 public:
  /// Probability one.
  constexpr LogWeight() = default;

  static LogWeight from_log(double log_value);
  static LogWeight from_prob(double prob);
  static constexpr LogWeight zero() {
    LogWeight w;
    w.value_ = -std::numeric_limits<double>::infinity();
    return w;
  }
  static constexpr LogWeight one() { return LogWeight{}; }

  /// Natural logarithm of the weight.
  constexpr double value() const { return value_; }
  double prob() const { return std::exp(value_); }
  double bits() const { return value_ / std::numbers::ln2; }
  constexpr bool is_zero() const { return value_ == -std::numeric_limits<double>::infinity(); }

  LogWeight& operator*=(LogWeight other) {
    value_ += other.value_;
    return *this;
  }
  friend LogWeight operator*(LogWeight a, LogWeight b) { return a *= b; }
  friend LogWeight operator/(LogWeight a, LogWeight b) { return from_log(a.value_ - b.value_); }

  friend constexpr auto operator<=>(LogWeight a, LogWeight b) { return a.value_ <=> b.value_; }
  friend constexpr bool operator==(LogWeight a, LogWeight b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

/// log(sum_i exp(terms_i)). The empty sum is negative infinity.
double log_sum_exp(std::span<const double> terms);

/// Sum of weights in probability space.
LogWeight log_sum_exp(std::span<const LogWeight> terms);

/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

}  // namespace entroscope
