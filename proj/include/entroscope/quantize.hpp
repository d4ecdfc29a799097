#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "entroscope/symbols.hpp"

/// Finite reference measures on the line and nested dyadic quantization in
/// reference-quantile space.
namespace entroscope::quantize {

/// A probability measure on an interval of the real line with a continuous
/// CDF. Cells of equal reference mass are taken in CDF space.
class ReferenceMeasure {
 public:
  enum class Kind { kUniform, kGaussian };

  /// Uniform on [0, 1].
  static ReferenceMeasure uniform() { return ReferenceMeasure(Kind::kUniform); }
  /// Standard normal on the whole line.
  static ReferenceMeasure gaussian() { return ReferenceMeasure(Kind::kGaussian); }
  /// "uniform" or "gaussian".
  static ReferenceMeasure parse(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;

  bool in_support(double x) const;
  double lower() const;
  double upper() const;
  double cdf(double x) const;
  /// Inverse CDF on [0, 1].
  double quantile(double u) const;
  /// Lebesgue density of the reference.
  double density(double x) const;
  double log_density(double x) const;

  friend bool operator==(const ReferenceMeasure&, const ReferenceMeasure&) = default;

 private:
  explicit ReferenceMeasure(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Largest supported level; 2^r cells must index as a Symbol.
inline constexpr int kMaxLevel = 30;

/// Alphabet of the 2^r cells at level r.
Alphabet level_alphabet(int r);

/// clamp(floor(cdf(x) 2^r), 0, 2^r - 1). Cell c covers reference quantiles
/// [c 2^-r, (c+1) 2^-r).
Symbol cell_index(double x, int r, const ReferenceMeasure& ref);

/// The level-r cell of reference quantile u in [0, 1]: the cell_index of any
/// x with cdf(x) = u.
Symbol quantile_cell(double u, int r);

/// Elementwise cell_index over a sample, as a string over 2^r symbols.
SymbolSequence quantize_sequence(std::span<const double> xs, int r, const ReferenceMeasure& ref);

/// The level-r cell containing a level-(r+1) cell.
constexpr Symbol refine_parent(Symbol cell) { return cell >> 1; }

}  // namespace entroscope::quantize
