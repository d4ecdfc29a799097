#include "entroscope/measure.hpp"

#include <algorithm>
#include <utility>

#include "entroscope/errors.hpp"

namespace entroscope {

namespace {

void require_alphabet(const Alphabet& expected, const SymbolSequence& seq) {
  if (seq.alphabet() != expected) {
    throw InvalidArgument("sequence alphabet (size " + std::to_string(seq.alphabet().size()) +
                          ") does not match measure alphabet (size " +
                          std::to_string(expected.size()) + ")");
  }
}

class GenericSuffixFamily final : public SuffixFamily {
 public:
  explicit GenericSuffixFamily(const SequentialMeasure& base) : base_(base) {}

  void open_window() override { windows_.emplace_back(length_ + 1, base_.start()); }

  void close_window(std::size_t start) override {
    std::erase_if(windows_, [start](const auto& w) { return w.first == start; });
  }

  std::vector<std::size_t> window_starts() const override {
    std::vector<std::size_t> out;
    out.reserve(windows_.size());
    for (const auto& w : windows_) out.push_back(w.first);
    return out;
  }

  void observe(Symbol s) override {
    for (auto& w : windows_) w.second->observe(s);
    ++length_;
  }

  ConditionalDistribution mean_conditional() const override {
    const Alphabet alphabet = base_.alphabet();
    if (windows_.empty()) throw InvalidArgument("suffix family has no open window");
    std::vector<std::vector<double>> per_symbol(alphabet.size());
    for (const auto& w : windows_) {
      const ConditionalDistribution c = w.second->conditional();
      for (Symbol a = 0; a < alphabet.size(); ++a) per_symbol[a].push_back(c.log_probs()[a]);
    }
    const double log_count = std::log(static_cast<double>(windows_.size()));
    std::vector<double> out(alphabet.size());
    for (Symbol a = 0; a < alphabet.size(); ++a) out[a] = log_sum_exp(per_symbol[a]) - log_count;
    return ConditionalDistribution(alphabet, std::move(out));
  }

 private:
  const SequentialMeasure& base_;
  std::size_t length_ = 0;
  std::vector<std::pair<std::size_t, std::unique_ptr<SequentialState>>> windows_;
};

class UniformState final : public SequentialState {
 public:
  explicit UniformState(Alphabet alphabet) : alphabet_(alphabet) {}
  ConditionalDistribution conditional() const override {
    return ConditionalDistribution::uniform(alphabet_);
  }
  LogWeight log_prob_next(Symbol) const override {
    return LogWeight::from_log(-alphabet_.log_size());
  }
  void observe(Symbol s) override {
    if (!alphabet_.contains(s)) throw InvalidArgument("symbol outside alphabet");
    ++length_;
  }
  std::size_t length() const override { return length_; }

 private:
  Alphabet alphabet_;
  std::size_t length_ = 0;
};

}  // namespace

ConditionalDistribution SequentialMeasure::conditional(const SymbolSequence& history) const {
  require_alphabet(alphabet(), history);
  auto state = start();
  for (Symbol s : history.symbols()) state->observe(s);
  return state->conditional();
}

std::unique_ptr<SuffixFamily> SequentialMeasure::suffix_family() const {
  return std::make_unique<GenericSuffixFamily>(*this);
}

LogWeight sequence_log_prob(const SequentialMeasure& measure, const SymbolSequence& seq) {
  require_alphabet(measure.alphabet(), seq);
  auto state = measure.start();
  double total = 0.0;
  for (Symbol s : seq.symbols()) {
    total += state->log_prob_next(s).value();
    state->observe(s);
  }
  return LogWeight::from_log(total);
}

std::unique_ptr<SequentialState> UniformIid::start() const {
  return std::make_unique<UniformState>(alphabet_);
}

}  // namespace entroscope
