#include "entroscope/log_weight.hpp"

#include <algorithm>
#include <string>

#include "entroscope/errors.hpp"

namespace entroscope {

LogWeight LogWeight::from_log(double log_value) {
  if (std::isnan(log_value)) throw InvalidArgument("LogWeight from NaN");
  LogWeight w;
  w.value_ = log_value;
  return w;
}

LogWeight LogWeight::from_prob(double prob) {
  if (!(prob >= 0.0)) throw InvalidArgument("LogWeight from negative or NaN probability");
  return from_log(std::log(prob));
}

double log_sum_exp(std::span<const double> terms) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (terms.empty()) return kNegInf;
  auto top = std::max_element(terms.begin(), terms.end());
  const double m = *top;
  if (m == kNegInf) return kNegInf;
  if (m == std::numeric_limits<double>::infinity()) return m;
  // The maximum contributes exactly 1; log1p keeps the rest accurate.
  double rest = 0.0;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it != top) rest += std::exp(*it - m);
  }
  return m + std::log1p(rest);
}

LogWeight log_sum_exp(std::span<const LogWeight> terms) {
  std::vector<double> raw(terms.size());
  std::transform(terms.begin(), terms.end(), raw.begin(), [](LogWeight w) { return w.value(); });
  return LogWeight::from_log(log_sum_exp(raw));
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace entroscope
