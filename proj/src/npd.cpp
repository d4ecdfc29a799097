#include "entroscope/npd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "entroscope/errors.hpp"

namespace entroscope::npd {

namespace {

double log_level_weight(int r) {
  const double rr = static_cast<double>(r);
  return -(std::log(rr + 1.0) + std::log(rr + 2.0));
}

/// Reference quantiles of the samples, checking the support.
std::vector<double> to_quantiles(std::span<const double> xs, const quantize::ReferenceMeasure& ref) {
  std::vector<double> u(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!ref.in_support(xs[i])) {
      throw InvalidArgument("sample " + std::to_string(xs[i]) + " at position " + std::to_string(i + 1) +
                            " outside the support of the " + ref.name() + " reference");
    }
    u[i] = ref.cdf(xs[i]);
  }
  return u;
}

ppm::MixtureState run_level(std::span<const double> quantiles, int r, const ppm::Options& options,
                            std::span<const std::size_t> checkpoints, std::vector<double>& excess) {
  ppm::MixtureState state(quantize::level_alphabet(r), options);
  std::size_t next = 0;
  for (std::size_t i = 0; i < quantiles.size(); ++i) {
    state.observe(quantize::quantile_cell(quantiles[i], r));
    while (next < checkpoints.size() && checkpoints[next] == i + 1) {
      excess[next++] = state.log_prob_over_uniform();
    }
  }
  return state;
}

/// excess[r][j] = log(PPM_r(prefix) 2^{r m_j}) for every level r <= max_level.
std::vector<std::vector<double>> level_excess(std::span<const double> quantiles, int max_level,
                                              const ppm::Options& options,
                                              std::span<const std::size_t> checkpoints) {
  std::vector<std::vector<double>> excess(static_cast<std::size_t>(max_level) + 1,
                                          std::vector<double>(checkpoints.size(), 0.0));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r <= max_level; ++r) {
    run_level(quantiles, r, options, checkpoints, excess[static_cast<std::size_t>(r)]);
  }
  return excess;
}

double combine(const std::vector<std::vector<double>>& excess, std::size_t column, int max_level) {
  std::vector<double> terms;
  for (int r = 0; r <= max_level; ++r) {
    terms.push_back(log_level_weight(r) + excess[static_cast<std::size_t>(r)][column]);
  }
  return log_sum_exp(terms);
}

std::vector<std::size_t> checked_checkpoints(std::span<const std::size_t> checkpoints, std::size_t n) {
  std::vector<std::size_t> out(checkpoints.begin(), checkpoints.end());
  for (std::size_t m : out) {
    if (m == 0 || m > n) throw InvalidArgument("checkpoint " + std::to_string(m) + " outside [1, n]");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

LogWeight level_weight(int r) {
  if (r < 0) throw InvalidArgument("negative quantization level");
  return LogWeight::from_log(log_level_weight(r));
}

int resolve_max_level(const NpdConfig& config, std::size_t n) {
  int level = 0;
  if (config.max_level) {
    level = *config.max_level;
    if (level < 1) throw InvalidArgument("max level must be at least 1");
  } else {
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    level = bits + 2;
  }
  if (level > quantize::kMaxLevel) {
    throw InvalidArgument("max level " + std::to_string(level) + " exceeds " +
                          std::to_string(quantize::kMaxLevel));
  }
  const std::size_t levels = static_cast<std::size_t>(level) + 1;
  if (n > 0 && levels > config.table_budget / n) {
    throw InvalidArgument("max level " + std::to_string(level) + " with " + std::to_string(n) +
                          " samples exceeds the table budget of " + std::to_string(config.table_budget));
  }
  return level;
}

LogWeight npd_log_density(std::span<const double> xs, const NpdConfig& config) {
  if (xs.empty()) throw InvalidArgument("npd density needs at least one sample");
  const int max_level = resolve_max_level(config, xs.size());
  const std::vector<double> quantiles = to_quantiles(xs, config.reference);
  const std::size_t last[] = {xs.size()};
  return LogWeight::from_log(combine(level_excess(quantiles, max_level, config.ppm, last), 0, max_level));
}

EntropyEstimate differential_entropy_rate(std::span<const double> xs, const NpdConfig& config,
                                          std::span<const std::size_t> checkpoints) {
  if (xs.empty()) throw InvalidArgument("entropy estimate needs at least one sample");
  const std::size_t n = xs.size();
  const int max_level = resolve_max_level(config, n);
  const std::vector<std::size_t> requested = checked_checkpoints(checkpoints, n);
  std::vector<std::size_t> points = requested;
  if (points.empty() || points.back() != n) points.push_back(n);
  const std::vector<double> quantiles = to_quantiles(xs, config.reference);
  const auto excess = level_excess(quantiles, max_level, config.ppm, points);

  EntropyEstimate out;
  out.n = n;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double m = static_cast<double>(points[j]);
    const double value = -combine(excess, j, resolve_max_level(config, points[j])) / m;
    if (points[j] == n) out.value = value;
    if (std::binary_search(requested.begin(), requested.end(), points[j])) {
      out.trace.emplace_back(points[j], value);
    }
  }
  return out;
}

EntropyEstimate discrete_entropy_rate(const SymbolSequence& seq, const ppm::Options& options,
                                      std::span<const std::size_t> checkpoints) {
  if (seq.empty()) throw InvalidArgument("entropy estimate needs at least one symbol");
  const std::vector<std::size_t> points = checked_checkpoints(checkpoints, seq.size());
  ppm::MixtureState state(seq.alphabet(), options);
  EntropyEstimate out;
  out.n = seq.size();
  std::size_t next = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    state.observe(seq[i]);
    if (next < points.size() && points[next] == i + 1) {
      out.trace.emplace_back(i + 1, -state.log_prob().value() / static_cast<double>(i + 1));
      ++next;
    }
  }
  out.value = -state.log_prob().value() / static_cast<double>(seq.size());
  return out;
}

Predictor::Predictor(std::span<const double> history, const NpdConfig& config)
    : config_(config), max_level_(resolve_max_level(config, history.size() + 1)) {
  const std::vector<double> quantiles = to_quantiles(history, config.reference);
  const std::size_t levels = static_cast<std::size_t>(max_level_) + 1;
  std::vector<std::optional<ppm::MixtureState>> states(levels);
  std::vector<double> terms(levels);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r <= max_level_; ++r) {
    std::vector<double> unused;
    const auto idx = static_cast<std::size_t>(r);
    states[idx].emplace(run_level(quantiles, r, config.ppm, {}, unused));
    terms[idx] = log_level_weight(r) + states[idx]->log_prob_over_uniform();
  }
  const double z = log_sum_exp(terms);
  for (std::size_t r = 0; r < levels; ++r) {
    log_posterior_.push_back(terms[r] - z);
    levels_.push_back(std::move(*states[r]));
  }
  log_total_weight_ = std::log1p(-1.0 / (static_cast<double>(max_level_) + 2.0));
}

Predictor::Predictor(Predictor&&) noexcept = default;
Predictor& Predictor::operator=(Predictor&&) noexcept = default;
Predictor::~Predictor() = default;

double Predictor::density(double x) const {
  if (!config_.reference.in_support(x)) {
    throw InvalidArgument("query " + std::to_string(x) + " outside the support of the " +
                          config_.reference.name() + " reference");
  }
  const double u = config_.reference.cdf(x);
  std::vector<double> terms(levels_.size());
  for (std::size_t r = 0; r < levels_.size(); ++r) {
    const Symbol cell = quantize::quantile_cell(u, static_cast<int>(r));
    terms[r] = log_posterior_[r] + levels_[r].log_prob_next(cell).value() +
               static_cast<double>(r) * std::numbers::ln2;
  }
  return std::exp(log_sum_exp(terms) + log_total_weight_);
}

double predictive_density(double x, std::span<const double> history, const NpdConfig& config) {
  return Predictor(history, config).density(x);
}

}  // namespace entroscope::npd
