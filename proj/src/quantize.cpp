#include "entroscope/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entroscope/errors.hpp"

namespace entroscope::quantize {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Acklam's rational approximation (relative error ~1e-9), polished below.
double normal_quantile_initial(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  // Work in the lower tail, where the CDF keeps full relative precision;
  // 1 - p is exact for p > 0.5.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double x = normal_quantile_initial(p);
  // Two Halley steps against the erfc-based CDF.
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace

ReferenceMeasure ReferenceMeasure::parse(const std::string& name) {
  if (name == "uniform") return uniform();
  if (name == "gaussian") return gaussian();
  throw InvalidArgument("unknown reference measure '" + name + "' (expected uniform or gaussian)");
}

std::string ReferenceMeasure::name() const {
  return kind_ == Kind::kUniform ? "uniform" : "gaussian";
}

bool ReferenceMeasure::in_support(double x) const {
  if (std::isnan(x)) return false;
  return kind_ == Kind::kUniform ? (x >= 0.0 && x <= 1.0) : std::isfinite(x);
}

double ReferenceMeasure::lower() const {
  return kind_ == Kind::kUniform ? 0.0 : -std::numeric_limits<double>::infinity();
}

double ReferenceMeasure::upper() const {
  return kind_ == Kind::kUniform ? 1.0 : std::numeric_limits<double>::infinity();
}

double ReferenceMeasure::cdf(double x) const {
  if (kind_ == Kind::kUniform) return std::clamp(x, 0.0, 1.0);
  return normal_cdf(x);
}

double ReferenceMeasure::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("quantile level outside [0, 1]");
  if (kind_ == Kind::kUniform) return u;
  return normal_quantile(u);
}

double ReferenceMeasure::density(double x) const {
  if (kind_ == Kind::kUniform) return in_support(x) ? 1.0 : 0.0;
  return normal_pdf(x);
}

double ReferenceMeasure::log_density(double x) const {
  if (kind_ == Kind::kUniform) {
    return in_support(x) ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

Alphabet level_alphabet(int r) {
  if (r < 0 || r > kMaxLevel) {
    throw InvalidArgument("quantization level " + std::to_string(r) + " outside [0, " +
                          std::to_string(kMaxLevel) + "]");
  }
  return Alphabet(std::size_t{1} << r);
}

Symbol quantile_cell(double u, int r) {
  const std::size_t cells = level_alphabet(r).size();
  // Scaling by a power of two is exact, so nested levels agree bit for bit.
  const double scaled = std::floor(u * static_cast<double>(cells));
  if (!(scaled > 0.0)) return 0;
  if (scaled >= static_cast<double>(cells)) return static_cast<Symbol>(cells - 1);
  return static_cast<Symbol>(scaled);
}

Symbol cell_index(double x, int r, const ReferenceMeasure& ref) {
  level_alphabet(r);
  if (!ref.in_support(x)) {
    throw InvalidArgument("sample " + std::to_string(x) + " outside the support of the " +
                          ref.name() + " reference");
  }
  return quantile_cell(ref.cdf(x), r);
}

SymbolSequence quantize_sequence(std::span<const double> xs, int r, const ReferenceMeasure& ref) {
  const Alphabet alphabet = level_alphabet(r);
  std::vector<Symbol> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      out[i] = cell_index(xs[i], r, ref);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("position " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return SymbolSequence(alphabet, std::move(out));
}

}  // namespace entroscope::quantize
