#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entroscope/measure.hpp"
#include "entroscope/quantize.hpp"
#include "entroscope/symbols.hpp"

/// Synthetic stationary sources with exact sampling, true conditionals and
/// closed-form entropy rates. They are the ground truth of every
/// convergence experiment.
namespace entroscope::sources {

enum class SourceKind { kIidCategorical, kMarkov, kIidUniformReal, kGaussianAr1, kPeriodic };

struct AnalyticRate {
  enum class RelativeTo { kCountingMeasure, kReferenceMeasure };
  /// Nats per symbol.
  double value = 0.0;
  RelativeTo relative_to = RelativeTo::kCountingMeasure;
};

class SourceModel {
 public:
  static SourceModel iid_categorical(std::vector<double> probs);
  static SourceModel fair_coin() { return iid_categorical({0.5, 0.5}); }
  /// A Markov chain of order k over |A| symbols given |A|^k transition rows.
  /// Row index reads the context oldest symbol first, most significant
  /// first. Must be irreducible and aperiodic.
  static SourceModel markov(std::vector<std::vector<double>> rows);
  /// I.i.d. Uniform[0, 1].
  static SourceModel uniform_real();
  /// x_{i+1} = rho x_i + sqrt(1 - rho^2) e_i with N(0, 1) marginals.
  static SourceModel gaussian_ar1(double rho);
  /// Repeats `pattern` from phase 0. The alphabet defaults to
  /// max(2, largest symbol + 1).
  static SourceModel periodic(std::vector<Symbol> pattern, std::size_t alphabet_size = 0);

  /// Parses `fair-coin`, `iid:p=0.3,0.7`, `markov:rows=0.9,0.1;0.2,0.8`,
  /// `ar1:rho=0.5`, `uniform` or `periodic:01` (or `periodic:0,1,2`).
  static SourceModel parse(std::string_view spec);

  SourceKind kind() const { return kind_; }
  /// Canonical spec string; parse(spec()) reproduces the model.
  std::string spec() const;
  bool is_discrete() const;
  Alphabet alphabet() const;
  std::size_t markov_order() const { return order_; }
  double rho() const { return rho_; }
  /// Stationary distribution over Markov contexts (|A|^k states).
  const std::vector<double>& stationary() const { return stationary_; }

  SymbolSequence sample_symbols(std::size_t n, std::uint64_t seed) const;
  std::vector<double> sample_reals(std::size_t n, std::uint64_t seed) const;

  /// Exact next-symbol distribution of a finite-alphabet source.
  ConditionalDistribution true_conditional(std::span<const Symbol> history) const;
  /// Exact next-sample density of a real-valued source at `x`.
  double true_conditional_density(std::span<const double> history, double x) const;

  /// Entropy rate in nats. Finite-alphabet kinds are relative to counting
  /// measure; real-valued kinds need a reference and are relative to it.
  AnalyticRate analytic_entropy_rate(const quantize::ReferenceMeasure* reference = nullptr) const;
  /// Differential entropy rate relative to Lebesgue measure, real kinds only.
  double lebesgue_entropy_rate() const;
  /// Mistake rate of the optimal one-step predictor; empty for real kinds.
  std::optional<double> bayes_error() const;

 private:
  SourceModel() = default;
  std::size_t row_of(std::span<const Symbol> context) const;

  SourceKind kind_ = SourceKind::kIidCategorical;
  std::size_t alphabet_size_ = 0;
  std::vector<double> probs_;
  std::size_t order_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> stationary_;
  double rho_ = 0.0;
  std::vector<Symbol> pattern_;
};

/// The true conditionals of a finite-alphabet source as a sequential measure.
class SourceMeasure final : public SequentialMeasure {
 public:
  explicit SourceMeasure(SourceModel model);
  Alphabet alphabet() const override { return model_.alphabet(); }
  std::unique_ptr<SequentialState> start() const override;
  const SourceModel& model() const { return model_; }

 private:
  SourceModel model_;
};

}  // namespace entroscope::sources
