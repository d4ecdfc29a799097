// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned
// below; seeds are 1..10 wherever a criterion counts seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "entroscope/npd.hpp"
#include "entroscope/ppm.hpp"
#include "entroscope/ppm_reference.hpp"
#include "entroscope/predict.hpp"
#include "entroscope/quantize.hpp"
#include "entroscope/sources.hpp"

using namespace entroscope;

namespace {

constexpr int kSeeds = 10;
constexpr int kSeedsNeeded = 8;

// Shipped prediction defaults.
constexpr std::size_t kCesaroCap = 16;
constexpr std::size_t kPredictMaxOrder = 16;

const char* kMarkov = "markov:rows=0.9,0.1;0.2,0.8";

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<std::vector<Symbol>> all_strings(std::size_t a, std::size_t n) {
  std::vector<std::vector<Symbol>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<Symbol>> next;
    for (const auto& w : out) {
      for (Symbol s = 0; s < a; ++s) {
        next.push_back(w);
        next.back().push_back(s);
      }
    }
    out = std::move(next);
  }
  return out;
}

Outcome exact_normalization() {
  double worst_ppm = 0.0;
  double worst_cesaro = 0.0;
  for (std::size_t a : {2, 3}) {
    for (auto smoothing : {ppm::SmoothingRule::laplace(), ppm::SmoothingRule::krichevsky_trofimov()}) {
      for (auto scheme : {ppm::WeightScheme::kRational, ppm::WeightScheme::kLogTelescoping}) {
        const ppm::Options options{smoothing, scheme, std::nullopt};
        for (std::size_t n = 0; n <= 8; ++n) {
          double total = 0.0;
          for (const auto& w : all_strings(a, n)) {
            total += ppm::mixture_log_prob(SymbolSequence(Alphabet(a), w), options).prob();
          }
          worst_ppm = std::max(worst_ppm, std::abs(total - 1.0));
        }
        const predict::CesaroMeasure cesaro(std::make_shared<ppm::PpmMixture>(Alphabet(a), options));
        for (std::size_t n = 0; n <= 8; ++n) {
          for (const auto& w : all_strings(a, n)) {
            auto state = cesaro.start();
            for (Symbol s : w) state->observe(s);
            const auto c = state->conditional();
            double sum = 0.0;
            for (Symbol s = 0; s < a; ++s) sum += c.prob(s);
            worst_cesaro = std::max(worst_cesaro, std::abs(sum - 1.0));
          }
        }
      }
    }
  }
  return {worst_ppm <= 1e-9 && worst_cesaro <= 1e-12,
          fmt("max |sum PPM - 1| = %.2e (tol 1e-9), max |sum cesaro - 1| = %.2e (tol 1e-12)", worst_ppm,
              worst_cesaro)};
}

Outcome spot_values() {
  const SymbolSequence x01(Alphabet(2), {0, 1});
  const SymbolSequence x0(Alphabet(2), {0});
  const double fast = ppm::mixture_log_prob(x01).prob();
  const double slow =
      ppm::reference::mixture_log_prob(x01, ppm::SmoothingRule::laplace(), ppm::WeightScheme::kRational).prob();
  const double cond_fast = ppm::mixture_conditional(x0).prob(0);
  const double cond_slow =
      ppm::reference::mixture_conditional(x0, ppm::SmoothingRule::laplace(), ppm::WeightScheme::kRational).prob(0);
  // Agreement to the last couple of bits; the closed forms to 1e-15.
  auto close = [](double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); };
  const bool pass = close(fast, 5.0 / 24.0, 1e-15) && close(slow, fast, 4e-16) &&
                    close(cond_fast, 7.0 / 12.0, 1e-15) && close(cond_slow, cond_fast, 4e-16);
  return {pass, fmt("PPM(01) = %.17g vs reference %.17g; P(0|0) = %.17g vs reference %.17g", fast, slow, cond_fast,
                    cond_slow)};
}

Outcome finite_alphabet_entropy() {
  std::string detail;
  bool pass = true;
  for (const char* spec : {"fair-coin", kMarkov}) {
    const auto model = sources::SourceModel::parse(spec);
    const double truth = model.analytic_entropy_rate().value;
    int hits = 0;
    double worst = 0.0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      const double est = npd::discrete_entropy_rate(model.sample_symbols(200000, seed)).value;
      worst = std::max(worst, std::abs(est - truth));
      hits += std::abs(est - truth) <= 0.02 ? 1 : 0;
    }
    pass = pass && hits >= kSeedsNeeded;
    detail += fmt("%s%s: %d/%d seeds within 0.02 of %.5f (worst %.4f)", detail.empty() ? "" : "; ", spec, hits,
                  kSeeds, truth, worst);
  }
  return {pass, detail};
}

Outcome differential_entropy() {
  struct Case {
    const char* spec;
    quantize::ReferenceMeasure ref;
  };
  std::string detail;
  bool pass = true;
  for (const Case& c : {Case{"uniform", quantize::ReferenceMeasure::uniform()},
                        Case{"ar1:rho=0.5", quantize::ReferenceMeasure::gaussian()}}) {
    const auto model = sources::SourceModel::parse(c.spec);
    const double truth = model.analytic_entropy_rate(&c.ref).value;
    npd::NpdConfig config;
    config.reference = c.ref;
    int hits = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      const double est = npd::differential_entropy_rate(model.sample_reals(10000, seed), config).value;
      lo = std::min(lo, est);
      hi = std::max(hi, est);
      hits += std::abs(est - truth) <= 0.05 ? 1 : 0;
    }
    pass = pass && hits >= kSeedsNeeded;
    detail += fmt("%s%s: %d/%d seeds within 0.05 of %.4f (range [%.4f, %.4f])", detail.empty() ? "" : "; ", c.spec,
                  hits, kSeeds, truth, lo, hi);
  }
  return {pass, detail};
}

Outcome truncation_audit() {
  struct Case {
    const char* spec;
    quantize::ReferenceMeasure ref;
    std::size_t n;
  };
  bool pass = true;
  double worst_ratio = 0.0;
  int checked = 0;
  for (const Case& c : {Case{"uniform", quantize::ReferenceMeasure::uniform(), 1000},
                        Case{"uniform", quantize::ReferenceMeasure::uniform(), 10000},
                        Case{"ar1:rho=0.5", quantize::ReferenceMeasure::gaussian(), 1000},
                        Case{"ar1:rho=0.5", quantize::ReferenceMeasure::gaussian(), 10000}}) {
    const auto xs = sources::SourceModel::parse(c.spec).sample_reals(c.n, 1);
    npd::NpdConfig config;
    config.reference = c.ref;
    const int r = npd::resolve_max_level(config, c.n);
    config.max_level = r;
    const double at_r = npd::differential_entropy_rate(xs, config).value;
    config.max_level = r + 5;
    const double at_r5 = npd::differential_entropy_rate(xs, config).value;
    const double bound = -std::log1p(-1.0 / (r + 2.0)) / static_cast<double>(c.n);
    const double diff = at_r - at_r5;
    // Extra levels only add mass, so the difference is nonnegative.
    pass = pass && diff >= 0.0 && diff <= bound;
    worst_ratio = std::max(worst_ratio, diff / bound);
    ++checked;
  }
  return {pass, fmt("%d inputs, max (estimate difference / bound) = %.3g", checked, worst_ratio)};
}

Outcome predictor_mistakes() {
  struct Case {
    const char* spec;
    std::function<bool(double)> ok;
    const char* band;
  };
  const Case cases[] = {
      {kMarkov, [](double d) { return std::abs(d - 2.0 / 15.0) <= 0.01; }, "2/15 +- 0.01"},
      {"periodic:0", [](double d) { return d <= 0.01; }, "<= 0.01"},
      {"fair-coin", [](double d) { return d >= 0.48 && d <= 0.52; }, "[0.48, 0.52]"},
  };
  std::string detail;
  bool pass = true;
  for (const Case& c : cases) {
    const auto model = sources::SourceModel::parse(c.spec);
    ppm::Options options;
    options.max_order = kPredictMaxOrder;
    const predict::CesaroMeasure measure(std::make_shared<ppm::PpmMixture>(model.alphabet(), options), kCesaroCap);
    std::vector<double> density(kSeeds);
#pragma omp parallel for schedule(dynamic, 1)
    for (int seed = 1; seed <= kSeeds; ++seed) {
      density[seed - 1] = predict::run_prediction(model.sample_symbols(200000, seed), measure).mistake_density();
    }
    const int hits = static_cast<int>(std::count_if(density.begin(), density.end(), c.ok));
    const auto [lo, hi] = std::minmax_element(density.begin(), density.end());
    pass = pass && hits >= kSeedsNeeded;
    detail += fmt("%s%s: %d/%d in %s (range [%.4f, %.4f])", detail.empty() ? "" : "; ", c.spec, hits, kSeeds, c.band,
                  *lo, *hi);
  }
  return {pass, detail};
}

Outcome log_ratio_diagnostic() {
  std::string detail;
  bool pass = true;
  for (const char* spec : {"fair-coin", kMarkov}) {
    const auto model = sources::SourceModel::parse(spec);
    ppm::Options options;
    options.max_order = kPredictMaxOrder;
    const predict::CesaroMeasure measure(std::make_shared<ppm::PpmMixture>(model.alphabet(), options), kCesaroCap);
    const auto points = predict::log_ratio_diagnostic(model, measure, {100, 1000, 10000}, 100, 1);
    const bool decreasing =
        points[0].mean_log_ratio > points[1].mean_log_ratio && points[1].mean_log_ratio > points[2].mean_log_ratio;
    pass = pass && decreasing && points[2].mean_log_ratio <= 0.01;
    detail += fmt("%s%s: %.5f > %.5f > %.6f", detail.empty() ? "" : "; ", spec, points[0].mean_log_ratio,
                  points[1].mean_log_ratio, points[2].mean_log_ratio);
  }
  return {pass, detail + " (final tol 0.01)"};
}

Outcome structural_properties() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  int failures = 0;

  // Nesting and monotonicity on 10^4 points, r <= 20.
  for (const auto& ref : {quantize::ReferenceMeasure::uniform(), quantize::ReferenceMeasure::gaussian()}) {
    std::vector<double> xs(10000);
    for (auto& x : xs) x = ref == quantize::ReferenceMeasure::uniform() ? unit(rng) : normal(rng);
    std::sort(xs.begin(), xs.end());
    for (int r = 0; r < 20; ++r) {
      Symbol previous = 0;
      for (double x : xs) {
        const Symbol coarse = quantize::cell_index(x, r, ref);
        failures += quantize::refine_parent(quantize::cell_index(x, r + 1, ref)) != coarse;
        failures += coarse < previous;
        previous = coarse;
      }
    }
  }

  // Level-0 floor and quantile-space reduction.
  double worst_reduction = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(1 + rng() % 200);
    for (auto& x : xs) x = normal(rng);
    npd::NpdConfig gaussian;
    gaussian.reference = quantize::ReferenceMeasure::gaussian();
    std::vector<double> us;
    for (double x : xs) us.push_back(gaussian.reference.cdf(x));
    const double lg = npd::npd_log_density(xs, gaussian).value();
    const double lu = npd::npd_log_density(us, npd::NpdConfig{}).value();
    failures += lg < std::log(0.5);
    worst_reduction = std::max(worst_reduction, std::abs(lg - lu));
  }
  failures += worst_reduction > 1e-10;

  // Order saturation.
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<Symbol> w(n);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 3);
    const SymbolSequence seq(Alphabet(3), w);
    const double saturated = ppm::order_log_prob(seq, n - 1, {}).value();
    for (std::size_t k = n; k < n + 6; ++k) failures += ppm::order_log_prob(seq, k, {}).value() != saturated;
  }
  return {failures == 0, fmt("%d violations; quantile reduction max error %.2e (tol 1e-10)", failures,
                             worst_reduction)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "exact normalization", 10, exact_normalization},
      {2, "closed-form spot values", INFINITY, spot_values},
      {3, "finite-alphabet entropy consistency", 120, finite_alphabet_entropy},
      {4, "differential entropy consistency", 300, differential_entropy},
      {5, "truncation audit", INFINITY, truncation_audit},
      {6, "predictor mistake density", 600, predictor_mistakes},
      {7, "log-ratio diagnostic", INFINITY, log_ratio_diagnostic},
      {8, "structural properties", INFINITY, structural_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += fmt("; over the %.0f s limit", c.limit_seconds);
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("criterion %d %s: %s (%s; %.1f s)\n", c.id, c.name, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
