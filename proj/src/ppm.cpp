#include "entroscope/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entroscope/errors.hpp"

namespace entroscope::ppm {

namespace {

constexpr std::size_t kDenseAlphabetLimit = 64;

void require_smoothing(SmoothingRule smoothing) {
  if (!(smoothing.beta > 0.0) || !std::isfinite(smoothing.beta)) {
    throw InvalidArgument("smoothing constant must be positive and finite");
  }
}

double log_weight(std::size_t k, WeightScheme scheme) {
  const double kk = static_cast<double>(k);
  switch (scheme) {
    case WeightScheme::kRational:
      return -(std::log(kk + 1.0) + std::log(kk + 2.0));
    case WeightScheme::kLogTelescoping: {
      // 1/log2(k+2) - 1/log2(k+3) without the cancellation of the direct form.
      const double a = std::log2(kk + 2.0);
      const double b = std::log2(kk + 3.0);
      const double diff = std::log1p(1.0 / (kk + 2.0)) / std::numbers::ln2;
      return std::log(diff) - std::log(a) - std::log(b);
    }
  }
  return 0.0;
}

double log_weight_tail(std::size_t K, WeightScheme scheme) {
  const double kk = static_cast<double>(K);
  switch (scheme) {
    case WeightScheme::kRational:
      return -std::log(kk + 1.0);
    case WeightScheme::kLogTelescoping:
      return -std::log(std::log2(kk + 2.0));
  }
  return 0.0;
}

}  // namespace

LogWeight weight(std::size_t k, WeightScheme scheme) {
  return LogWeight::from_log(log_weight(k, scheme));
}

LogWeight weight_tail(std::size_t K, WeightScheme scheme) {
  return LogWeight::from_log(log_weight_tail(K, scheme));
}

std::pair<std::uint64_t, std::uint64_t> rational_weight_fraction(std::size_t k) {
  return {1, static_cast<std::uint64_t>(k + 1) * static_cast<std::uint64_t>(k + 2)};
}

std::pair<std::uint64_t, std::uint64_t> rational_weight_tail_fraction(std::size_t K) {
  return {1, static_cast<std::uint64_t>(K + 1)};
}

/// Mixture state of one suffix window: for every order k it keeps
/// D_k = log P_k(window) + length * log|A|. Orders that never saw a repeated
/// context have D_k = 0, so in the exact mode all orders beyond the deepest
/// active one are held as a single tail entry of weight weight_tail(M).
class MixtureWindow {
 public:
  MixtureWindow(Alphabet alphabet, const Options& options, std::size_t start)
      : alphabet_(alphabet),
        beta_(options.smoothing.beta),
        scheme_(options.scheme),
        capped_(options.max_order.has_value()),
        start_(start),
        dense_(alphabet.size() <= kDenseAlphabetLimit) {
    const std::size_t entries = capped_ ? *options.max_order + 1 : 1;
    for (std::size_t k = 0; k + 1 < entries; ++k) log_w_.push_back(log_weight(k, scheme_));
    log_w_.push_back(log_weight_tail(entries - 1, scheme_));
    excess_.assign(entries, 0.0);
  }

  std::size_t start() const { return start_; }

  /// Loads the counts this window sees for the next position.
  void prepare(const ContextTrie& trie, std::span<const ContextTrie::PathStep> path) {
    totals_.clear();
    dense_counts_.clear();
    const std::size_t depth_cap = capped_ ? std::min(path.size(), excess_.size()) : path.size();
    const std::size_t a = alphabet_.size();
    for (std::size_t d = 0; d < depth_cap; ++d) {
      std::uint32_t t = 0;
      if (dense_) {
        const std::size_t base = dense_counts_.size();
        dense_counts_.resize(base + a, 0);
        t = trie.visit_counts(path[d], d, start_,
                              [&](Symbol s, std::uint32_t c) { dense_counts_[base + s] = c; });
        if (t == 0) dense_counts_.resize(base);
      } else {
        t = trie.total(path[d], d, start_);
      }
      if (t == 0) break;
      totals_.push_back(t);
    }
    // Exact mode: keep the tail entry strictly deeper than any active order.
    if (!capped_ && totals_.size() + 1 > excess_.size()) {
      const std::size_t old_tail = excess_.size() - 1;
      const std::size_t new_tail = totals_.size();
      log_w_.resize(new_tail + 1);
      excess_.resize(new_tail + 1, 0.0);
      for (std::size_t k = old_tail; k < new_tail; ++k) log_w_[k] = log_weight(k, scheme_);
      log_w_[new_tail] = log_weight_tail(new_tail, scheme_);
    }
  }

  double log_prob_next(const ContextTrie& trie, std::span<const ContextTrie::PathStep> path,
                       Symbol s) const {
    posterior(post_);
    const double a = static_cast<double>(alphabet_.size());
    double p = 0.0;
    double uniform_mass = 0.0;
    for (std::size_t k = 0; k < post_.size(); ++k) {
      if (k < totals_.size()) {
        const double c = dense_ ? dense_counts_[k * alphabet_.size() + s]
                                : trie.count_of(path[k], k, start_, s);
        p += post_[k] * (c + beta_) / (totals_[k] + beta_ * a);
      } else {
        uniform_mass += post_[k];
      }
    }
    return std::log(p + uniform_mass / a);
  }

  /// Adds scale * P(a | window) to probs[a] for every symbol.
  void add_conditional(const ContextTrie& trie, std::span<const ContextTrie::PathStep> path,
                       std::span<double> probs, double scale) const {
    posterior(post_);
    const double a = static_cast<double>(alphabet_.size());
    double base = 0.0;
    for (std::size_t k = 0; k < post_.size(); ++k) {
      if (k < totals_.size()) {
        const double norm = post_[k] * scale / (totals_[k] + beta_ * a);
        base += norm * beta_;
        if (dense_) {
          const std::uint32_t* row = dense_counts_.data() + k * alphabet_.size();
          for (std::size_t s = 0; s < alphabet_.size(); ++s) probs[s] += norm * row[s];
        } else {
          trie.visit_counts(path[k], k, start_,
                            [&](Symbol s, std::uint32_t c) { probs[s] += norm * c; });
        }
      } else {
        base += post_[k] * scale / a;
      }
    }
    for (double& p : probs) p += base;
  }

  void observe(const ContextTrie& trie, std::span<const ContextTrie::PathStep> path, Symbol s) {
    const double a = static_cast<double>(alphabet_.size());
    const double log_a = std::log(a);
    const std::size_t active = std::min(totals_.size(), excess_.size());
    for (std::size_t k = 0; k < active; ++k) {
      const double c = dense_ ? dense_counts_[k * alphabet_.size() + s]
                              : trie.count_of(path[k], k, start_, s);
      excess_[k] += std::log((c + beta_) / (totals_[k] + beta_ * a)) + log_a;
    }
  }

  /// log sum_k w_k exp(D_k) = log(P(window) |A|^length).
  double log_mixture() const {
    terms_.resize(excess_.size());
    for (std::size_t k = 0; k < excess_.size(); ++k) terms_[k] = log_w_[k] + excess_[k];
    return log_sum_exp(terms_);
  }

 private:
  void posterior(std::vector<double>& out) const {
    const double z = log_mixture();
    out.resize(excess_.size());
    for (std::size_t k = 0; k < excess_.size(); ++k) out[k] = std::exp(terms_[k] - z);
  }

  Alphabet alphabet_;
  double beta_;
  WeightScheme scheme_;
  bool capped_;
  std::size_t start_;
  bool dense_;
  std::vector<double> log_w_;
  std::vector<double> excess_;
  std::vector<std::uint32_t> totals_;
  std::vector<std::uint32_t> dense_counts_;
  mutable std::vector<double> terms_;
  mutable std::vector<double> post_;
};

namespace {

std::size_t path_limit(const Options& options) {
  return options.max_order ? *options.max_order : std::numeric_limits<std::size_t>::max();
}

/// Suffix windows of the PPM mixture sharing one position-tracking table.
class PpmSuffixFamily final : public SuffixFamily {
 public:
  PpmSuffixFamily(Alphabet alphabet, const Options& options)
      : alphabet_(alphabet),
        options_(options),
        trie_(alphabet, ContextTrie::Options{options.max_order, true}) {}

  void open_window() override {
    windows_.emplace_back(alphabet_, options_, trie_.size() + 1);
    windows_.back().prepare(trie_, path_);
  }

  void close_window(std::size_t start) override {
    std::erase_if(windows_, [start](const MixtureWindow& w) { return w.start() == start; });
  }

  std::vector<std::size_t> window_starts() const override {
    std::vector<std::size_t> out;
    for (const auto& w : windows_) out.push_back(w.start());
    return out;
  }

  void observe(Symbol s) override {
    if (!alphabet_.contains(s)) throw InvalidArgument("symbol outside alphabet");
    for (auto& w : windows_) w.observe(trie_, path_, s);
    trie_.append(s);
    trie_.context_path(path_limit(options_), path_);
    for (auto& w : windows_) w.prepare(trie_, path_);
  }

  ConditionalDistribution mean_conditional() const override {
    if (windows_.empty()) throw InvalidArgument("suffix family has no open window");
    std::vector<double> probs(alphabet_.size(), 0.0);
    const double scale = 1.0 / static_cast<double>(windows_.size());
    for (const auto& w : windows_) w.add_conditional(trie_, path_, probs, scale);
    return ConditionalDistribution::from_probs(alphabet_, probs);
  }

 private:
  Alphabet alphabet_;
  Options options_;
  ContextTrie trie_;
  std::vector<ContextTrie::PathStep> path_;
  std::vector<MixtureWindow> windows_;
};

class OrderState final : public SequentialState {
 public:
  OrderState(Alphabet alphabet, std::size_t order, SmoothingRule smoothing)
      : order_(order),
        beta_(smoothing.beta),
        trie_(alphabet, ContextTrie::Options{order, false}) {}

  ConditionalDistribution conditional() const override {
    const Alphabet& alphabet = trie_.alphabet();
    std::vector<double> probs(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
    if (has_context()) {
      const double norm = trie_.total(path_[order_], order_, 1) + beta_ * alphabet.size();
      std::fill(probs.begin(), probs.end(), beta_ / norm);
      trie_.visit_counts(path_[order_], order_, 1,
                         [&](Symbol s, std::uint32_t c) { probs[s] += c / norm; });
    }
    return ConditionalDistribution::from_probs(alphabet, probs);
  }

  LogWeight log_prob_next(Symbol s) const override {
    const double a = static_cast<double>(trie_.alphabet().size());
    if (!has_context()) return LogWeight::from_log(-std::log(a));
    const double c = trie_.count_of(path_[order_], order_, 1, s);
    const double t = trie_.total(path_[order_], order_, 1);
    return LogWeight::from_log(std::log((c + beta_) / (t + beta_ * a)));
  }

  void observe(Symbol s) override {
    trie_.append(s);
    trie_.context_path(order_, path_);
  }

  std::size_t length() const override { return trie_.size(); }

 private:
  // Truncated contexts (positions i <= k) and unseen contexts are uniform.
  bool has_context() const { return path_.size() > order_; }

  std::size_t order_;
  double beta_;
  ContextTrie trie_;
  std::vector<ContextTrie::PathStep> path_;
};

}  // namespace

MixtureState::MixtureState(Alphabet alphabet, const Options& options)
    : trie_(alphabet, ContextTrie::Options{options.max_order, false}),
      window_(std::make_unique<MixtureWindow>(alphabet, options, 1)) {
  require_smoothing(options.smoothing);
  prepare();
}

MixtureState::MixtureState(MixtureState&&) noexcept = default;
MixtureState& MixtureState::operator=(MixtureState&&) noexcept = default;
MixtureState::~MixtureState() = default;

void MixtureState::prepare() {
  const auto& max_depth = trie_.max_depth();
  trie_.context_path(max_depth ? *max_depth : std::numeric_limits<std::size_t>::max(), path_);
  window_->prepare(trie_, path_);
}

ConditionalDistribution MixtureState::conditional() const {
  std::vector<double> probs(trie_.alphabet().size(), 0.0);
  window_->add_conditional(trie_, path_, probs, 1.0);
  return ConditionalDistribution::from_probs(trie_.alphabet(), probs);
}

LogWeight MixtureState::log_prob_next(Symbol s) const {
  if (!trie_.alphabet().contains(s)) throw InvalidArgument("symbol outside alphabet");
  return LogWeight::from_log(window_->log_prob_next(trie_, path_, s));
}

void MixtureState::observe(Symbol s) {
  if (!trie_.alphabet().contains(s)) throw InvalidArgument("symbol outside alphabet");
  window_->observe(trie_, path_, s);
  trie_.append(s);
  prepare();
}

LogWeight MixtureState::log_prob() const {
  return LogWeight::from_log(log_prob_over_uniform() -
                             static_cast<double>(trie_.size()) * trie_.alphabet().log_size());
}

double MixtureState::log_prob_over_uniform() const { return window_->log_mixture(); }

std::unique_ptr<SequentialState> PpmMixture::start() const {
  return std::make_unique<MixtureState>(alphabet_, options_);
}

std::unique_ptr<SuffixFamily> PpmMixture::suffix_family() const {
  require_smoothing(options_.smoothing);
  return std::make_unique<PpmSuffixFamily>(alphabet_, options_);
}

std::unique_ptr<SequentialState> PpmOrder::start() const {
  require_smoothing(smoothing_);
  return std::make_unique<OrderState>(alphabet_, order_, smoothing_);
}

ConditionalDistribution markov_conditional(const ContextTrie& table,
                                           const SymbolSequence& context,
                                           SmoothingRule smoothing) {
  require_smoothing(smoothing);
  const Alphabet& alphabet = table.alphabet();
  if (context.alphabet() != alphabet) throw InvalidArgument("context alphabet mismatch");
  const auto counts = table.counts(context.symbols());
  std::uint64_t total = 0;
  for (const auto& [s, c] : counts) total += c;
  const double norm = static_cast<double>(total) + smoothing.beta * alphabet.size();
  std::vector<double> probs(alphabet.size(), smoothing.beta / norm);
  for (const auto& [s, c] : counts) probs[s] += c / norm;
  return ConditionalDistribution::from_probs(alphabet, probs);
}

LogWeight order_log_prob(const SymbolSequence& seq, std::size_t k, SmoothingRule smoothing) {
  return sequence_log_prob(PpmOrder(seq.alphabet(), k, smoothing), seq);
}

LogWeight mixture_log_prob(const SymbolSequence& seq, const Options& options) {
  MixtureState state(seq.alphabet(), options);
  for (Symbol s : seq.symbols()) state.observe(s);
  return state.log_prob();
}

ConditionalDistribution mixture_conditional(const SymbolSequence& history,
                                            const Options& options) {
  MixtureState state(history.alphabet(), options);
  for (Symbol s : history.symbols()) state.observe(s);
  return state.conditional();
}

}  // namespace entroscope::ppm
