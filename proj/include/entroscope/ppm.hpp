#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "entroscope/context_trie.hpp"
#include "entroscope/log_weight.hpp"
#include "entroscope/measure.hpp"
#include "entroscope/symbols.hpp"

/// Smoothed k-th order Markov measures and the PPM mixture over all orders.
namespace entroscope::ppm {

/// Additive smoothing P(a|c) = (N(c,a) + beta) / (N(c) + beta |A|).
struct SmoothingRule {
  double beta = 1.0;

  static constexpr SmoothingRule laplace() { return {1.0}; }
  static constexpr SmoothingRule krichevsky_trofimov() { return {0.5}; }
};

/// Prior over Markov orders k = 0, 1, 2, ...
enum class WeightScheme {
  /// w_k = 1/(k+1) - 1/(k+2)
  kRational,
  /// w_k = 1/log2(k+2) - 1/log2(k+3)
  kLogTelescoping,
};

struct Options {
  SmoothingRule smoothing = SmoothingRule::laplace();
  WeightScheme scheme = WeightScheme::kRational;
  /// When set, orders >= max_order are merged into order max_order, which
  /// bounds the per-symbol cost on highly repetitive data. The result is
  /// still a normalized, consistent measure. Unset means the exact infinite
  /// mixture.
  std::optional<std::size_t> max_order;
};

LogWeight weight(std::size_t k, WeightScheme scheme);

/// Sum of weight(k) over k >= K, in closed form.
LogWeight weight_tail(std::size_t K, WeightScheme scheme);

/// Exact rational weight as (numerator, denominator); rational scheme only.
std::pair<std::uint64_t, std::uint64_t> rational_weight_fraction(std::size_t k);
std::pair<std::uint64_t, std::uint64_t> rational_weight_tail_fraction(std::size_t K);

/// Smoothed next-symbol distribution from the counts following `context`.
/// Unseen contexts give the uniform distribution.
ConditionalDistribution markov_conditional(const ContextTrie& table,
                                           const SymbolSequence& context,
                                           SmoothingRule smoothing);

/// Prequential log-probability of `seq` under the order-k measure: position i
/// conditions on x_{max(1,i-k)..i-1} using counts from positions before i.
LogWeight order_log_prob(const SymbolSequence& seq, std::size_t k, SmoothingRule smoothing);

/// Log-probability under the infinite mixture sum_k w_k P_k. Exact, because
/// P_k(seq) = P_{n-1}(seq) for every k >= n-1.
LogWeight mixture_log_prob(const SymbolSequence& seq, const Options& options = {});

/// Next-symbol distribution of the mixture after `history`.
ConditionalDistribution mixture_conditional(const SymbolSequence& history,
                                            const Options& options = {});

class MixtureWindow;

/// Incremental evaluation of the PPM mixture. Each symbol costs time linear
/// in the longest previously seen context, not in the history length.
class MixtureState final : public SequentialState {
 public:
  MixtureState(Alphabet alphabet, const Options& options);
  MixtureState(MixtureState&&) noexcept;
  MixtureState& operator=(MixtureState&&) noexcept;
  ~MixtureState() override;

  ConditionalDistribution conditional() const override;
  LogWeight log_prob_next(Symbol s) const override;
  void observe(Symbol s) override;
  std::size_t length() const override { return trie_.size(); }

  /// Joint log-probability of everything observed.
  LogWeight log_prob() const;
  /// log(P(x_{1:n}) |A|^n): the joint probability relative to the uniform
  /// measure, which stays O(1) in magnitude for long strings.
  double log_prob_over_uniform() const;

  const ContextTrie& table() const { return trie_; }

 private:
  void prepare();

  ContextTrie trie_;
  std::vector<ContextTrie::PathStep> path_;
  std::unique_ptr<MixtureWindow> window_;
};

/// The PPM mixture as a sequential measure.
class PpmMixture final : public SequentialMeasure {
 public:
  PpmMixture(Alphabet alphabet, Options options = {}) : alphabet_(alphabet), options_(options) {}

  Alphabet alphabet() const override { return alphabet_; }
  const Options& options() const { return options_; }
  std::unique_ptr<SequentialState> start() const override;
  /// One shared position-tracking table serves every window.
  std::unique_ptr<SuffixFamily> suffix_family() const override;

 private:
  Alphabet alphabet_;
  Options options_;
};

/// A single smoothed order-k Markov measure.
class PpmOrder final : public SequentialMeasure {
 public:
  PpmOrder(Alphabet alphabet, std::size_t order, SmoothingRule smoothing = {})
      : alphabet_(alphabet), order_(order), smoothing_(smoothing) {}

  Alphabet alphabet() const override { return alphabet_; }
  std::size_t order() const { return order_; }
  std::unique_ptr<SequentialState> start() const override;

 private:
  Alphabet alphabet_;
  std::size_t order_;
  SmoothingRule smoothing_;
};

}  // namespace entroscope::ppm
