#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "entroscope/measure.hpp"
#include "entroscope/sources.hpp"
#include "entroscope/symbols.hpp"

/// The Cesaro-mean measure over history suffixes, its argmax predictor under
/// 0-1 loss, and the expected log-ratio diagnostic against a true source.
namespace entroscope::predict {

/// 1-based start positions s of the suffixes x_{s..n} averaged after a
/// history of length n. Without a cap every start 1..n+1 is used. With a
/// cap K the starts are the s with (s - 1) divisible by the smallest power
/// of two D such that floor(n / D) + 1 <= K: evenly spaced suffix lengths,
/// at most K of them, and a set that only ever loses members as n grows
/// apart from the newly opened empty suffix.
std::vector<std::size_t> averaging_starts(std::size_t n, std::optional<std::size_t> cap = {});

/// Arithmetic mean of base.conditional over the suffixes of `history`
/// selected by averaging_starts. Evaluated from scratch.
ConditionalDistribution cesaro_conditional(const SequentialMeasure& base,
                                           const SymbolSequence& history,
                                           std::optional<std::size_t> cap = {});

class CesaroMeasure final : public SequentialMeasure {
 public:
  explicit CesaroMeasure(std::shared_ptr<const SequentialMeasure> base,
                         std::optional<std::size_t> cap = {});

  Alphabet alphabet() const override { return base_->alphabet(); }
  /// Streams the suffix windows through the base measure's suffix family.
  std::unique_ptr<SequentialState> start() const override;

  const SequentialMeasure& base() const { return *base_; }
  const std::optional<std::size_t>& cap() const { return cap_; }

 private:
  std::shared_ptr<const SequentialMeasure> base_;
  std::optional<std::size_t> cap_;
};

/// Most probable next symbol under the Cesaro conditional, smallest index on ties.
Symbol predict_next(const SymbolSequence& history, const CesaroMeasure& measure);

struct PredictionTrace {
  std::vector<Symbol> predicted;
  std::vector<Symbol> actual;
  /// cumulative_mistakes[i] counts the mistakes at steps 1..i+1.
  std::vector<std::uint32_t> cumulative_mistakes;
  std::optional<std::size_t> cap;
  /// True when some step averaged fewer suffixes than the history allowed.
  bool approximated = false;

  std::size_t size() const { return actual.size(); }
  bool mistake(std::size_t step) const { return predicted.at(step - 1) != actual.at(step - 1); }
  /// Fraction of mistakes over steps 1..n.
  double mistake_density(std::size_t n) const;
  double mistake_density() const { return mistake_density(size()); }
};

/// One-step-ahead prediction over the whole sequence.
PredictionTrace run_prediction(const SymbolSequence& seq, const CesaroMeasure& measure);

struct DiagnosticPoint {
  std::size_t n = 0;
  double mean_log_ratio = 0.0;
  std::size_t replicas = 0;
};

/// Replica mean of E[log P(X_{n+1} | X_{1:n}) - log Rbar(X_{n+1} | X_{1:n})]
/// at each checkpoint n. The inner expectation over X_{n+1} is taken exactly,
/// as the divergence between the two conditionals, so only the history is
/// sampled. Replicas run in parallel on seeds derive_seed(seed, replica).
std::vector<DiagnosticPoint> log_ratio_diagnostic(const sources::SourceModel& source,
                                                  const CesaroMeasure& measure,
                                                  const std::vector<std::size_t>& checkpoints,
                                                  std::size_t replicas, std::uint64_t seed);

}  // namespace entroscope::predict
