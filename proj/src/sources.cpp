#include "entroscope/sources.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "entroscope/errors.hpp"
#include "entroscope/rng.hpp"

namespace entroscope::sources {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_distribution(std::span<const double> probs, const std::string& what) {
  if (probs.empty()) throw InvalidArgument(what + ": empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument(what + ": invalid probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << what << ": probabilities sum to " << sum << ", not 1";
    throw InvalidArgument(os.str());
  }
}

std::size_t draw(Rng& rng, std::span<const double> probs) {
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  return last;
}

double entropy_of(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(sep, from);
    out.push_back(trim(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from)));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("source '" + std::string(spec) + "': bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_numbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number(part, spec));
  return out;
}

std::string_view expect_key(std::string_view args, std::string_view key, std::string_view spec) {
  const std::string prefix = std::string(key) + "=";
  if (args.substr(0, prefix.size()) != prefix) {
    throw InvalidArgument("source '" + std::string(spec) + "': expected '" + prefix + "...'");
  }
  return args.substr(prefix.size());
}

// Shortest form that parses back to the same double.
std::string format_number(double x) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

// Strong connectivity of the transition graph and the gcd of its cycle
// lengths, from BFS levels.
void check_ergodic(std::size_t states, std::size_t symbols, const std::vector<std::vector<double>>& rows) {
  auto next_state = [&](std::size_t s, std::size_t a) { return (s * symbols + a) % states; };
  std::vector<long> level(states, -1);
  std::deque<std::size_t> queue{0};
  level[0] = 0;
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < symbols; ++a) {
      if (rows[s][a] <= 0.0) continue;
      const std::size_t t = next_state(s, a);
      if (level[t] < 0) {
        level[t] = level[s] + 1;
        queue.push_back(t);
      }
    }
  }
  std::vector<bool> reaches_zero(states, false);
  reaches_zero[0] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < states; ++s) {
      if (reaches_zero[s]) continue;
      for (std::size_t a = 0; a < symbols; ++a) {
        if (rows[s][a] > 0.0 && reaches_zero[next_state(s, a)]) {
          reaches_zero[s] = true;
          changed = true;
          break;
        }
      }
    }
  }
  for (std::size_t s = 0; s < states; ++s) {
    if (level[s] < 0 || !reaches_zero[s]) throw InvalidArgument("markov chain is not irreducible");
  }
  long period = 0;
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < symbols; ++a) {
      if (rows[s][a] <= 0.0) continue;
      period = std::gcd(period, std::abs(level[s] + 1 - level[next_state(s, a)]));
    }
  }
  if (period != 1) throw InvalidArgument("markov chain is periodic");
}

std::vector<double> stationary_of(std::size_t states, std::size_t symbols,
                                  const std::vector<std::vector<double>>& rows) {
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states),
                                            static_cast<Eigen::Index>(states));
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < symbols; ++a) {
      const std::size_t t = (s * symbols + a) % states;
      m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) += rows[s][a];
    }
  }
  m -= Eigen::MatrixXd::Identity(m.rows(), m.cols());
  m.row(m.rows() - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.rows());
  rhs(rhs.size() - 1) = 1.0;
  const Eigen::VectorXd pi = m.fullPivLu().solve(rhs);
  std::vector<double> out(states);
  double total = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    out[s] = std::max(0.0, pi(static_cast<Eigen::Index>(s)));
    total += out[s];
  }
  for (double& p : out) p /= total;
  return out;
}

}  // namespace

SourceModel SourceModel::iid_categorical(std::vector<double> probs) {
  check_distribution(probs, "iid source");
  SourceModel m;
  m.kind_ = SourceKind::kIidCategorical;
  m.alphabet_size_ = probs.size();
  m.probs_ = std::move(probs);
  return m;
}

SourceModel SourceModel::markov(std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw InvalidArgument("markov source: no rows");
  const std::size_t symbols = rows.front().size();
  if (symbols < 2) throw InvalidArgument("markov source: rows need at least two symbols");
  std::size_t order = 0;
  std::size_t states = 1;
  while (states < rows.size()) {
    states *= symbols;
    ++order;
  }
  if (states != rows.size()) {
    throw InvalidArgument("markov source: row count " + std::to_string(rows.size()) +
                          " is not a power of the alphabet size " + std::to_string(symbols));
  }
  for (std::size_t s = 0; s < states; ++s) {
    if (rows[s].size() != symbols) throw InvalidArgument("markov source: ragged rows");
    check_distribution(rows[s], "markov row " + std::to_string(s));
  }
  check_ergodic(states, symbols, rows);
  SourceModel m;
  m.kind_ = SourceKind::kMarkov;
  m.alphabet_size_ = symbols;
  m.order_ = order;
  m.stationary_ = stationary_of(states, symbols, rows);
  m.rows_ = std::move(rows);
  return m;
}

SourceModel SourceModel::uniform_real() {
  SourceModel m;
  m.kind_ = SourceKind::kIidUniformReal;
  return m;
}

SourceModel SourceModel::gaussian_ar1(double rho) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("ar1 source: |rho| must be below 1");
  SourceModel m;
  m.kind_ = SourceKind::kGaussianAr1;
  m.rho_ = rho;
  return m;
}

SourceModel SourceModel::periodic(std::vector<Symbol> pattern, std::size_t alphabet_size) {
  if (pattern.empty()) throw InvalidArgument("periodic source: empty pattern");
  const Symbol top = *std::max_element(pattern.begin(), pattern.end());
  const std::size_t needed = std::max<std::size_t>(2, std::size_t{top} + 1);
  if (alphabet_size == 0) alphabet_size = needed;
  if (alphabet_size < needed) throw InvalidArgument("periodic source: symbol outside the alphabet");
  SourceModel m;
  m.kind_ = SourceKind::kPeriodic;
  m.alphabet_size_ = alphabet_size;
  m.pattern_ = std::move(pattern);
  return m;
}

SourceModel SourceModel::parse(std::string_view spec) {
  spec = trim(spec);
  const std::size_t colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : trim(spec.substr(colon + 1));
  const bool has_args = colon != std::string_view::npos;
  auto no_args = [&] {
    if (has_args) throw InvalidArgument("source '" + std::string(spec) + "' takes no parameters");
  };
  if (name == "fair-coin") {
    no_args();
    return fair_coin();
  }
  if (name == "uniform") {
    no_args();
    return uniform_real();
  }
  if (name == "iid") return iid_categorical(parse_numbers(expect_key(args, "p", spec), spec));
  if (name == "markov") {
    std::vector<std::vector<double>> rows;
    for (std::string_view row : split(expect_key(args, "rows", spec), ';')) {
      rows.push_back(parse_numbers(row, spec));
    }
    return markov(std::move(rows));
  }
  if (name == "ar1") return gaussian_ar1(parse_number(expect_key(args, "rho", spec), spec));
  if (name == "periodic") {
    if (args.empty()) throw InvalidArgument("periodic source needs a pattern, e.g. periodic:01");
    std::vector<Symbol> pattern;
    const bool listed = args.find(',') != std::string_view::npos;
    for (std::string_view part : listed ? split(args, ',') : std::vector<std::string_view>{}) {
      const double v = parse_number(part, spec);
      if (v < 0 || v != std::floor(v) || v > 1e9) {
        throw InvalidArgument("source '" + std::string(spec) + "': bad symbol '" + std::string(part) + "'");
      }
      pattern.push_back(static_cast<Symbol>(v));
    }
    if (!listed) {
      for (char c : args) {
        if (c < '0' || c > '9') {
          throw InvalidArgument("source '" + std::string(spec) + "': pattern must be digits");
        }
        pattern.push_back(static_cast<Symbol>(c - '0'));
      }
    }
    return periodic(std::move(pattern));
  }
  throw InvalidArgument("unknown source '" + std::string(spec) +
                        "' (expected fair-coin, iid:p=..., markov:rows=..., ar1:rho=..., uniform, periodic:...)");
}

std::string SourceModel::spec() const {
  std::string out;
  switch (kind_) {
    case SourceKind::kIidCategorical:
      out = "iid:p=";
      for (std::size_t i = 0; i < probs_.size(); ++i) out += (i ? "," : "") + format_number(probs_[i]);
      return out;
    case SourceKind::kMarkov:
      out = "markov:rows=";
      for (std::size_t s = 0; s < rows_.size(); ++s) {
        if (s) out += ";";
        for (std::size_t a = 0; a < rows_[s].size(); ++a) out += (a ? "," : "") + format_number(rows_[s][a]);
      }
      return out;
    case SourceKind::kIidUniformReal:
      return "uniform";
    case SourceKind::kGaussianAr1:
      return "ar1:rho=" + format_number(rho_);
    case SourceKind::kPeriodic:
      out = "periodic:";
      for (std::size_t i = 0; i < pattern_.size(); ++i) out += (i ? "," : "") + std::to_string(pattern_[i]);
      return out;
  }
  return out;
}

bool SourceModel::is_discrete() const {
  return kind_ != SourceKind::kIidUniformReal && kind_ != SourceKind::kGaussianAr1;
}

Alphabet SourceModel::alphabet() const {
  if (!is_discrete()) throw InvalidArgument("source '" + spec() + "' is real-valued and has no alphabet");
  return Alphabet(alphabet_size_);
}

std::size_t SourceModel::row_of(std::span<const Symbol> context) const {
  std::size_t row = 0;
  for (Symbol s : context) row = row * alphabet_size_ + s;
  return row;
}

SymbolSequence SourceModel::sample_symbols(std::size_t n, std::uint64_t seed) const {
  const Alphabet a = alphabet();
  Rng rng(seed);
  std::vector<Symbol> out;
  out.reserve(n);
  switch (kind_) {
    case SourceKind::kIidCategorical:
      for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<Symbol>(draw(rng, probs_)));
      break;
    case SourceKind::kMarkov: {
      // The first k symbols are one stationary block, then transitions.
      std::size_t state = draw(rng, stationary_);
      std::vector<Symbol> block(order_);
      for (std::size_t j = order_; j-- > 0;) {
        block[j] = static_cast<Symbol>(state % alphabet_size_);
        state /= alphabet_size_;
      }
      for (std::size_t j = 0; j < order_ && out.size() < n; ++j) out.push_back(block[j]);
      while (out.size() < n) {
        const std::size_t row = row_of(std::span<const Symbol>(out).last(order_));
        out.push_back(static_cast<Symbol>(draw(rng, rows_[row])));
      }
      break;
    }
    case SourceKind::kPeriodic:
      for (std::size_t i = 0; i < n; ++i) out.push_back(pattern_[i % pattern_.size()]);
      break;
    default:
      break;
  }
  return SymbolSequence(a, std::move(out));
}

std::vector<double> SourceModel::sample_reals(std::size_t n, std::uint64_t seed) const {
  if (is_discrete()) throw InvalidArgument("source '" + spec() + "' is not real-valued");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  if (kind_ == SourceKind::kIidUniformReal) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform());
    return out;
  }
  const double scale = std::sqrt(1.0 - rho_ * rho_);
  double x = rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) x = rho_ * x + scale * rng.normal();
    out.push_back(x);
  }
  return out;
}

ConditionalDistribution SourceModel::true_conditional(std::span<const Symbol> history) const {
  const Alphabet a = alphabet();
  for (Symbol s : history) {
    if (!a.contains(s)) throw InvalidArgument("history symbol outside the source alphabet");
  }
  switch (kind_) {
    case SourceKind::kIidCategorical:
      return ConditionalDistribution::from_probs(a, probs_);
    case SourceKind::kPeriodic: {
      std::vector<double> p(alphabet_size_, 0.0);
      p[pattern_[history.size() % pattern_.size()]] = 1.0;
      return ConditionalDistribution::from_probs(a, p);
    }
    case SourceKind::kMarkov: {
      if (history.size() >= order_) return ConditionalDistribution::from_probs(a, rows_[row_of(history.last(order_))]);
      // Short history: ratio of stationary block marginals.
      const std::size_t m = history.size();
      std::size_t tail = 1;
      for (std::size_t j = m + 1; j < order_; ++j) tail *= alphabet_size_;
      const std::size_t base = row_of(history);
      std::vector<double> p(alphabet_size_, 0.0);
      for (std::size_t sym = 0; sym < alphabet_size_; ++sym) {
        const std::size_t first = (base * alphabet_size_ + sym) * tail;
        for (std::size_t s = first; s < first + tail; ++s) p[sym] += stationary_[s];
      }
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      if (!(total > 0.0)) throw InvalidArgument("history has probability zero under the source");
      for (double& v : p) v /= total;
      return ConditionalDistribution::from_probs(a, p);
    }
    default:
      break;
  }
  throw InvalidArgument("source has no alphabet");
}

double SourceModel::true_conditional_density(std::span<const double> history, double x) const {
  if (kind_ == SourceKind::kIidUniformReal) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  if (kind_ != SourceKind::kGaussianAr1) throw InvalidArgument("source '" + spec() + "' is not real-valued");
  const double mean = history.empty() ? 0.0 : rho_ * history.back();
  const double var = history.empty() ? 1.0 : 1.0 - rho_ * rho_;
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

AnalyticRate SourceModel::analytic_entropy_rate(const quantize::ReferenceMeasure* reference) const {
  using RelativeTo = AnalyticRate::RelativeTo;
  switch (kind_) {
    case SourceKind::kIidCategorical:
      return {entropy_of(probs_), RelativeTo::kCountingMeasure};
    case SourceKind::kPeriodic:
      return {0.0, RelativeTo::kCountingMeasure};
    case SourceKind::kMarkov: {
      double h = 0.0;
      for (std::size_t s = 0; s < rows_.size(); ++s) h += stationary_[s] * entropy_of(rows_[s]);
      return {h, RelativeTo::kCountingMeasure};
    }
    default:
      break;
  }
  if (reference == nullptr) throw InvalidArgument("real-valued source needs a reference measure");
  const bool gaussian = reference->kind() == quantize::ReferenceMeasure::Kind::kGaussian;
  if (kind_ == SourceKind::kIidUniformReal) {
    // -D(U[0,1] || N(0,1)) = E log phi(X) = -log(2 pi)/2 - 1/6.
    const double v = gaussian ? -0.5 * std::log(2.0 * std::numbers::pi) - 1.0 / 6.0 : 0.0;
    return {v, RelativeTo::kReferenceMeasure};
  }
  if (!gaussian) {
    throw InvalidArgument("ar1 source is not absolutely continuous with respect to the uniform reference");
  }
  return {0.5 * std::log(1.0 - rho_ * rho_), RelativeTo::kReferenceMeasure};
}

double SourceModel::lebesgue_entropy_rate() const {
  if (kind_ == SourceKind::kIidUniformReal) return 0.0;
  if (kind_ == SourceKind::kGaussianAr1) {
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * (1.0 - rho_ * rho_));
  }
  throw InvalidArgument("source '" + spec() + "' is not real-valued");
}

std::optional<double> SourceModel::bayes_error() const {
  switch (kind_) {
    case SourceKind::kIidCategorical:
      return 1.0 - *std::max_element(probs_.begin(), probs_.end());
    case SourceKind::kPeriodic:
      return 0.0;
    case SourceKind::kMarkov: {
      double e = 0.0;
      for (std::size_t s = 0; s < rows_.size(); ++s) {
        e += stationary_[s] * (1.0 - *std::max_element(rows_[s].begin(), rows_[s].end()));
      }
      return e;
    }
    default:
      return std::nullopt;
  }
}

namespace {

class SourceState final : public SequentialState {
 public:
  explicit SourceState(const SourceModel& model) : model_(model) {}
  ConditionalDistribution conditional() const override { return model_.true_conditional(history_); }
  void observe(Symbol s) override {
    if (!model_.alphabet().contains(s)) throw InvalidArgument("symbol outside the source alphabet");
    history_.push_back(s);
  }
  std::size_t length() const override { return history_.size(); }

 private:
  const SourceModel& model_;
  std::vector<Symbol> history_;
};

}  // namespace

SourceMeasure::SourceMeasure(SourceModel model) : model_(std::move(model)) {
  if (!model_.is_discrete()) throw InvalidArgument("source measure needs a finite-alphabet source");
}

std::unique_ptr<SequentialState> SourceMeasure::start() const { return std::make_unique<SourceState>(model_); }

}  // namespace entroscope::sources
