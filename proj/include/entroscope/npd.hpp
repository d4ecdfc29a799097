#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entroscope/log_weight.hpp"
#include "entroscope/ppm.hpp"
#include "entroscope/quantize.hpp"
#include "entroscope/symbols.hpp"

/// The NPD density: a mixture over dyadic quantization levels r = 0, 1, ...
/// of PPM measures on the quantized data, each corrected by the reciprocal
/// reference mass 2^{rn} of the visited cells.
namespace entroscope::npd {

struct NpdConfig {
  quantize::ReferenceMeasure reference = quantize::ReferenceMeasure::uniform();
  /// Per-level PPM mixture over Markov orders.
  ppm::Options ppm;
  /// Highest level R_max; automatic (ceil(log2 n) + 2) when empty.
  std::optional<int> max_level;
  /// Upper bound on (R_max + 1) n, the number of per-level symbols held.
  std::size_t table_budget = std::size_t{1} << 28;
};

/// Level weight 1/(r+1) - 1/(r+2).
LogWeight level_weight(int r);

/// The level bound used for n samples.
int resolve_max_level(const NpdConfig& config, std::size_t n);

struct EntropyEstimate {
  std::size_t n = 0;
  /// Nats per sample.
  double value = 0.0;
  /// (prefix length, estimate on that prefix) at the requested checkpoints.
  std::vector<std::pair<std::size_t, double>> trace;
};

/// log g(xs) with g = sum_{r <= R_max} w_r PPM_r(q_r(xs)) 2^{rn}. Levels are
/// evaluated in parallel.
LogWeight npd_log_density(std::span<const double> xs, const NpdConfig& config);

/// -log g(xs) / n, relative to the reference measure. Each checkpoint m is
/// evaluated as a standalone estimate on xs[0, m) with its own R_max.
EntropyEstimate differential_entropy_rate(std::span<const double> xs, const NpdConfig& config,
                                          std::span<const std::size_t> checkpoints = {});

/// -log PPM(seq) / n in nats, with optional checkpoints.
EntropyEstimate discrete_entropy_rate(const SymbolSequence& seq, const ppm::Options& options = {},
                                      std::span<const std::size_t> checkpoints = {});

/// Next-sample density after a fixed history.
///
/// The levels are weighted by their posterior given the history and the
/// result is scaled by the truncated weight total 1 - 1/(R_max + 2), so it
/// integrates to that total. With an empty history it equals g(x).
class Predictor {
 public:
  /// R_max is resolved for history.size() + 1 samples.
  Predictor(std::span<const double> history, const NpdConfig& config);
  Predictor(Predictor&&) noexcept;
  Predictor& operator=(Predictor&&) noexcept;
  ~Predictor();

  int max_level() const { return max_level_; }
  double density(double x) const;

 private:
  NpdConfig config_;
  int max_level_;
  double log_total_weight_;
  std::vector<double> log_posterior_;
  std::vector<ppm::MixtureState> levels_;
};

/// Predictor(history, config).density(x).
double predictive_density(double x, std::span<const double> history, const NpdConfig& config);

}  // namespace entroscope::npd
