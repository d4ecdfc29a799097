#include "entroscope/predict.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entroscope/errors.hpp"
#include "entroscope/rng.hpp"

namespace entroscope::predict {

namespace {

std::size_t stride(std::size_t n, std::optional<std::size_t> cap) {
  if (!cap) return 1;
  std::size_t d = 1;
  while (n / d + 1 > *cap) d *= 2;
  return d;
}

void require_cap(std::optional<std::size_t> cap) {
  if (cap && *cap == 0) throw InvalidArgument("averaging cap must be at least 1");
}

class CesaroState final : public SequentialState {
 public:
  CesaroState(const SequentialMeasure& base, std::optional<std::size_t> cap)
      : family_(base.suffix_family()), cap_(cap) {
    family_->open_window();
    starts_.push_back(1);
  }

  ConditionalDistribution conditional() const override { return family_->mean_conditional(); }

  void observe(Symbol s) override {
    family_->observe(s);
    ++length_;
    const std::size_t d = stride(length_, cap_);
    if (d != stride_) {
      stride_ = d;
      std::vector<std::size_t> kept;
      for (std::size_t start : starts_) {
        if ((start - 1) % d == 0) {
          kept.push_back(start);
        } else {
          family_->close_window(start);
        }
      }
      starts_ = std::move(kept);
    }
    if (length_ % d == 0) {
      family_->open_window();
      starts_.push_back(length_ + 1);
    }
  }

  std::size_t length() const override { return length_; }

 private:
  std::unique_ptr<SuffixFamily> family_;
  std::optional<std::size_t> cap_;
  std::vector<std::size_t> starts_;
  std::size_t length_ = 0;
  std::size_t stride_ = 1;
};

double divergence(const ConditionalDistribution& p, const ConditionalDistribution& q) {
  double kl = 0.0;
  for (Symbol a = 0; a < p.alphabet().size(); ++a) {
    const double lp = p.log_probs()[a];
    if (std::isinf(lp)) continue;
    kl += std::exp(lp) * (lp - q.log_probs()[a]);
  }
  return kl;
}

}  // namespace

std::vector<std::size_t> averaging_starts(std::size_t n, std::optional<std::size_t> cap) {
  require_cap(cap);
  const std::size_t d = stride(n, cap);
  std::vector<std::size_t> out;
  for (std::size_t s = 1; s <= n + 1; s += d) out.push_back(s);
  return out;
}

ConditionalDistribution cesaro_conditional(const SequentialMeasure& base,
                                           const SymbolSequence& history,
                                           std::optional<std::size_t> cap) {
  const Alphabet alphabet = base.alphabet();
  if (history.alphabet() != alphabet) throw InvalidArgument("history alphabet does not match the measure");
  const std::size_t n = history.size();
  const std::vector<std::size_t> starts = averaging_starts(n, cap);
  const double scale = 1.0 / static_cast<double>(starts.size());
  std::vector<double> probs(alphabet.size(), 0.0);
  for (std::size_t s : starts) {
    const ConditionalDistribution c = base.conditional(history.suffix(n - s + 1));
    for (Symbol a = 0; a < alphabet.size(); ++a) probs[a] += scale * c.prob(a);
  }
  return ConditionalDistribution::from_probs(alphabet, probs);
}

CesaroMeasure::CesaroMeasure(std::shared_ptr<const SequentialMeasure> base,
                             std::optional<std::size_t> cap)
    : base_(std::move(base)), cap_(cap) {
  if (!base_) throw InvalidArgument("cesaro measure needs a base measure");
  require_cap(cap_);
}

std::unique_ptr<SequentialState> CesaroMeasure::start() const {
  return std::make_unique<CesaroState>(*base_, cap_);
}

Symbol predict_next(const SymbolSequence& history, const CesaroMeasure& measure) {
  return measure.conditional(history).argmax();
}

double PredictionTrace::mistake_density(std::size_t n) const {
  if (n == 0 || n > size()) throw InvalidArgument("mistake density step outside the trace");
  return static_cast<double>(cumulative_mistakes[n - 1]) / static_cast<double>(n);
}

PredictionTrace run_prediction(const SymbolSequence& seq, const CesaroMeasure& measure) {
  if (seq.alphabet() != measure.alphabet()) throw InvalidArgument("sequence alphabet does not match the measure");
  if (seq.empty()) throw InvalidArgument("prediction needs at least one symbol");
  PredictionTrace trace;
  trace.cap = measure.cap();
  trace.predicted.reserve(seq.size());
  trace.actual.reserve(seq.size());
  trace.cumulative_mistakes.reserve(seq.size());
  auto state = measure.start();
  std::uint32_t mistakes = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Symbol guess = state->conditional().argmax();
    trace.predicted.push_back(guess);
    trace.actual.push_back(seq[i]);
    if (guess != seq[i]) ++mistakes;
    trace.cumulative_mistakes.push_back(mistakes);
    state->observe(seq[i]);
  }
  // Steps use full averaging while the history is shorter than the cap.
  trace.approximated = measure.cap() && seq.size() > *measure.cap();
  return trace;
}

std::vector<DiagnosticPoint> log_ratio_diagnostic(const sources::SourceModel& source,
                                                  const CesaroMeasure& measure,
                                                  const std::vector<std::size_t>& checkpoints,
                                                  std::size_t replicas, std::uint64_t seed) {
  if (!source.is_discrete()) {
    throw InvalidArgument("diagnostic needs a finite-alphabet source with exact conditionals");
  }
  if (source.alphabet() != measure.alphabet()) throw InvalidArgument("source and measure alphabets differ");
  if (replicas == 0) throw InvalidArgument("diagnostic needs at least one replica");
  std::vector<std::size_t> steps = checkpoints;
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (steps.empty()) return {};
  const std::size_t horizon = steps.back();

  std::vector<std::vector<double>> ratios(replicas, std::vector<double>(steps.size(), 0.0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t rep = 0; rep < replicas; ++rep) {
    const SymbolSequence xs = source.sample_symbols(horizon, derive_seed(seed, rep));
    auto state = measure.start();
    std::size_t next = 0;
    for (std::size_t m = 0; m <= horizon && next < steps.size(); ++m) {
      if (steps[next] == m) {
        const auto history = xs.symbols().first(m);
        ratios[rep][next++] = divergence(source.true_conditional(history), state->conditional());
      }
      if (m < horizon) state->observe(xs[m]);
    }
  }

  std::vector<DiagnosticPoint> out;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    double sum = 0.0;
    for (std::size_t rep = 0; rep < replicas; ++rep) sum += ratios[rep][j];
    out.push_back({steps[j], sum / static_cast<double>(replicas), replicas});
  }
  return out;
}

}  // namespace entroscope::predict
