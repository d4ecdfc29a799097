#include "entroscope/symbols.hpp"

#include <cmath>
#include <string>

#include "entroscope/errors.hpp"

namespace entroscope {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size == 0) throw InvalidArgument("alphabet must have at least one symbol");
}

double Alphabet::log_size() const { return std::log(static_cast<double>(size_)); }

SymbolSequence::SymbolSequence(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!alphabet_.contains(symbols_[i])) {
      throw InvalidArgument("symbol " + std::to_string(symbols_[i]) + " at position " +
                            std::to_string(i + 1) + " outside alphabet of size " +
                            std::to_string(alphabet_.size()));
    }
  }
}

void SymbolSequence::push_back(Symbol s) {
  if (!alphabet_.contains(s)) {
    throw InvalidArgument("symbol " + std::to_string(s) + " outside alphabet of size " +
                          std::to_string(alphabet_.size()));
  }
  symbols_.push_back(s);
}

SymbolSequence SymbolSequence::prefix(std::size_t length) const {
  length = std::min(length, symbols_.size());
  SymbolSequence out(alphabet_);
  out.symbols_.assign(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(length));
  return out;
}

SymbolSequence SymbolSequence::suffix(std::size_t length) const {
  length = std::min(length, symbols_.size());
  SymbolSequence out(alphabet_);
  out.symbols_.assign(symbols_.end() - static_cast<std::ptrdiff_t>(length), symbols_.end());
  return out;
}

ConditionalDistribution::ConditionalDistribution(Alphabet alphabet, std::vector<double> log_probs)
    : alphabet_(alphabet), log_probs_(std::move(log_probs)) {
  if (log_probs_.size() != alphabet_.size()) {
    throw InvalidArgument("conditional distribution needs one entry per symbol");
  }
  for (double v : log_probs_) {
    if (std::isnan(v) || v > 1e-9) throw InvalidArgument("conditional entry is not a log-probability");
  }
}

ConditionalDistribution ConditionalDistribution::uniform(Alphabet alphabet) {
  return ConditionalDistribution(alphabet,
                                 std::vector<double>(alphabet.size(), -alphabet.log_size()));
}

ConditionalDistribution ConditionalDistribution::from_probs(Alphabet alphabet,
                                                            std::span<const double> probs) {
  std::vector<double> logs(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw InvalidArgument("negative probability");
    logs[i] = std::log(probs[i]);
  }
  return ConditionalDistribution(alphabet, std::move(logs));
}

LogWeight ConditionalDistribution::log_prob(Symbol s) const {
  if (!alphabet_.contains(s)) throw InvalidArgument("symbol outside alphabet");
  return LogWeight::from_log(log_probs_[s]);
}

double ConditionalDistribution::prob(Symbol s) const { return log_prob(s).prob(); }

double ConditionalDistribution::log_total() const { return log_sum_exp(log_probs_); }

Symbol ConditionalDistribution::argmax() const {
  Symbol best = 0;
  for (Symbol s = 1; s < log_probs_.size(); ++s) {
    if (log_probs_[s] > log_probs_[best]) best = s;
  }
  return best;
}

}  // namespace entroscope
