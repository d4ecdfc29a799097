#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "entroscope/log_weight.hpp"
#include "entroscope/symbols.hpp"

namespace entroscope {

/// Incremental evaluation of a sequential measure along one string.
///
/// A state starts at the empty history; `observe` extends the history by one
/// symbol. States are single-owner and not thread-safe; the measure that made
/// them is.
class SequentialState {
 public:
  virtual ~SequentialState() = default;

  /// Distribution of the next symbol given everything observed so far.
  virtual ConditionalDistribution conditional() const = 0;
  virtual LogWeight log_prob_next(Symbol s) const { return conditional().log_prob(s); }
  virtual void observe(Symbol s) = 0;
  virtual std::size_t length() const = 0;
};

/// Conditionals of a base measure restricted to several suffixes of one
/// growing history. Window i covers positions start_i..length, evaluated as
/// if it were a fresh string.
class SuffixFamily {
 public:
  virtual ~SuffixFamily() = default;

  /// Opens a window starting at the next position (an empty suffix).
  virtual void open_window() = 0;
  /// Closes the window with the given 1-based start position.
  virtual void close_window(std::size_t start) = 0;
  virtual std::vector<std::size_t> window_starts() const = 0;
  /// Appends a symbol to the shared history, extending every open window.
  virtual void observe(Symbol s) = 0;
  /// Arithmetic mean of the open windows' next-symbol distributions.
  virtual ConditionalDistribution mean_conditional() const = 0;
};

/// A Kolmogorov-consistent probability measure on strings, given by its
/// next-symbol conditionals. Immutable after construction; safe to share.
class SequentialMeasure {
 public:
  virtual ~SequentialMeasure() = default;

  virtual Alphabet alphabet() const = 0;
  virtual std::unique_ptr<SequentialState> start() const = 0;

  /// Next-symbol distribution after `history`.
  virtual ConditionalDistribution conditional(const SymbolSequence& history) const;

  /// Suffix windows over one shared history. The default keeps one
  /// independent state per window.
  virtual std::unique_ptr<SuffixFamily> suffix_family() const;
};

/// Chain-rule log-probability of `seq`. Empty sequences have probability one.
LogWeight sequence_log_prob(const SequentialMeasure& measure, const SymbolSequence& seq);

/// The i.i.d. uniform measure over an alphabet.
class UniformIid final : public SequentialMeasure {
 public:
  explicit UniformIid(Alphabet alphabet) : alphabet_(alphabet) {}
  Alphabet alphabet() const override { return alphabet_; }
  std::unique_ptr<SequentialState> start() const override;

 private:
  Alphabet alphabet_;
};

}  // namespace entroscope
