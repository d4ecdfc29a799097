#include "entroscope/ppm_reference.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace entroscope::ppm::reference {

LogWeight order_log_prob(const SymbolSequence& seq, std::size_t k, SmoothingRule smoothing) {
  const std::size_t a = seq.alphabet().size();
  const auto x = seq.symbols();
  // Keyed by the literal context string; truncated contexts near the start
  // are shorter than k and therefore never collide with full ones.
  std::map<std::vector<Symbol>, std::vector<std::size_t>> table;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t from = i >= k ? i - k : 0;
    std::vector<Symbol> context(x.begin() + static_cast<std::ptrdiff_t>(from),
                                x.begin() + static_cast<std::ptrdiff_t>(i));
    auto& counts = table[context];
    if (counts.empty()) counts.assign(a, 0);
    std::size_t n = 0;
    for (std::size_t c : counts) n += c;
    total += std::log((counts[x[i]] + smoothing.beta) / (n + smoothing.beta * a));
    ++counts[x[i]];
  }
  return LogWeight::from_log(total);
}

LogWeight mixture_log_prob(const SymbolSequence& seq, SmoothingRule smoothing,
                           WeightScheme scheme) {
  const std::size_t n = seq.size();
  if (n == 0) return LogWeight::one();
  std::vector<LogWeight> terms;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    terms.push_back(weight(k, scheme) * reference::order_log_prob(seq, k, smoothing));
  }
  terms.push_back(weight_tail(n - 1, scheme) * reference::order_log_prob(seq, n - 1, smoothing));
  return log_sum_exp(terms);
}

ConditionalDistribution mixture_conditional(const SymbolSequence& history,
                                            SmoothingRule smoothing, WeightScheme scheme) {
  const double base = mixture_log_prob(history, smoothing, scheme).value();
  std::vector<double> logs;
  for (Symbol s = 0; s < history.alphabet().size(); ++s) {
    SymbolSequence extended = history;
    extended.push_back(s);
    logs.push_back(mixture_log_prob(extended, smoothing, scheme).value() - base);
  }
  return ConditionalDistribution(history.alphabet(), std::move(logs));
}

}  // namespace entroscope::ppm::reference
