#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entroscope/log_weight.hpp"

namespace entroscope {

/// Symbols are dense integers 0..size-1 of their alphabet.
using Symbol = std::uint32_t;

class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const { return size_; }
  bool contains(Symbol s) const { return s < size_; }
  /// log |A|, the per-symbol surprisal of the uniform distribution.
  double log_size() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

/// A finite string over an alphabet. Every element is checked on entry.
class SymbolSequence {
 public:
  explicit SymbolSequence(Alphabet alphabet) : alphabet_(alphabet) {}
  SymbolSequence(Alphabet alphabet, std::vector<Symbol> symbols);

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const Symbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  void push_back(Symbol s);

  /// The first `length` symbols.
  SymbolSequence prefix(std::size_t length) const;
  /// The last `length` symbols.
  SymbolSequence suffix(std::size_t length) const;

  friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

/// Next-symbol distribution, one log-probability per symbol.
class ConditionalDistribution {
 public:
  ConditionalDistribution(Alphabet alphabet, std::vector<double> log_probs);

  static ConditionalDistribution uniform(Alphabet alphabet);
  static ConditionalDistribution from_probs(Alphabet alphabet, std::span<const double> probs);

  const Alphabet& alphabet() const { return alphabet_; }
  LogWeight log_prob(Symbol s) const;
  double prob(Symbol s) const;
  std::span<const double> log_probs() const { return log_probs_; }

  /// Total mass in log space; zero for a normalized distribution.
  double log_total() const;

  /// Most probable symbol, ties broken toward the smallest index.
  Symbol argmax() const;

 private:
  Alphabet alphabet_;
  std::vector<double> log_probs_;
};

}  // namespace entroscope
