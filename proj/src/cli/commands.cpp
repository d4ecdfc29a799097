#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "entroscope/cli.hpp"
#include "entroscope/errors.hpp"
#include "entroscope/grid.hpp"
#include "entroscope/npd.hpp"
#include "entroscope/predict.hpp"

namespace entroscope::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

/// Runs body(i) for i in [0, count) in parallel; rethrows the first failure
/// in index order.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class Csv {
 public:
  explicit Csv(const ExperimentConfig& config) {
    text_ << "# entroscope " << kVersion << "\n";
    for (const auto& [key, value] : config.echo()) text_ << "# " << key << " = " << value << "\n";
  }

  void comment(const std::string& key, const std::string& value) {
    text_ << "# " << key << " = " << value << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << "\n";
  }

  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  return in;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

/// Real-valued input checked against the reference support, failures
/// reported by file line.
std::vector<double> load_reals(const ExperimentConfig& config) {
  std::ifstream in = open_input(*config.input);
  std::vector<std::size_t> lines;
  std::vector<double> xs = read_reals(in, &lines);
  const auto ref = config.reference_measure();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!ref.in_support(xs[i])) {
      throw DataError(lines[i], "value " + format_double(xs[i]) + " outside the support of the " + ref.name() +
                                    " reference");
    }
  }
  return xs;
}

SymbolSequence load_symbols(const ExperimentConfig& config) {
  std::ifstream in = open_input(*config.input);
  return read_symbols(in, Alphabet(*config.alphabet));
}

struct EntropyRows {
  std::vector<std::pair<std::size_t, double>> trace;
  std::optional<double> analytic;
};

void entropy_command(const ExperimentConfig& config, Csv& csv) {
  const double unit = config.bits ? std::numbers::ln2 : 1.0;
  const std::string suffix = config.bits ? "_bits" : "_nats";
  csv.row({"n", "estimate" + suffix, "analytic" + suffix, "abs_error", "seed"});

  auto emit = [&](const EntropyRows& rows, const std::string& seed) {
    for (const auto& [m, value] : rows.trace) {
      const double estimate = value / unit;
      const std::optional<double> analytic =
          rows.analytic ? std::optional<double>(*rows.analytic / unit) : std::nullopt;
      const std::optional<double> error =
          analytic ? std::optional<double>(std::abs(estimate - *analytic)) : std::nullopt;
      csv.row({std::to_string(m), format_double(estimate), optional_cell(analytic), optional_cell(error), seed});
    }
  };

  // Lebesgue-relative rate: subtract the mean log reference density.
  auto to_lebesgue = [&](std::vector<std::pair<std::size_t, double>>& trace, const std::vector<double>& xs) {
    if (!config.lebesgue) return;
    const auto ref = config.reference_measure();
    std::vector<double> prefix(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) prefix[i + 1] = prefix[i] + ref.log_density(xs[i]);
    for (auto& [m, value] : trace) value -= prefix[m] / static_cast<double>(m);
  };

  if (config.input) {
    EntropyRows rows;
    if (config.alphabet) {
      const SymbolSequence seq = load_symbols(config);
      if (seq.empty()) throw DataError(1, "input holds no symbols");
      rows.trace = npd::discrete_entropy_rate(seq, config.ppm_options(), log_grid(seq.size())).trace;
    } else {
      const std::vector<double> xs = load_reals(config);
      if (xs.empty()) throw DataError(1, "input holds no values");
      rows.trace = npd::differential_entropy_rate(xs, config.npd_config(), log_grid(xs.size())).trace;
      to_lebesgue(rows.trace, xs);
    }
    emit(rows, "");
    return;
  }

  const auto model = sources::SourceModel::parse(*config.source);
  const auto ref = config.reference_measure();
  std::optional<double> analytic;
  if (model.is_discrete()) {
    analytic = model.analytic_entropy_rate().value;
  } else {
    analytic = config.lebesgue ? model.lebesgue_entropy_rate() : model.analytic_entropy_rate(&ref).value;
  }
  const auto grid = log_grid(config.n);
  std::vector<EntropyRows> results(config.seeds);
  parallel_for(config.seeds, [&](std::size_t k) {
    const std::uint64_t seed = config.seed + k;
    results[k].analytic = analytic;
    if (model.is_discrete()) {
      const SymbolSequence seq = model.sample_symbols(config.n, seed);
      results[k].trace = npd::discrete_entropy_rate(seq, config.ppm_options(), grid).trace;
    } else {
      const std::vector<double> xs = model.sample_reals(config.n, seed);
      results[k].trace = npd::differential_entropy_rate(xs, config.npd_config(), grid).trace;
      to_lebesgue(results[k].trace, xs);
    }
  });
  for (std::size_t k = 0; k < config.seeds; ++k) emit(results[k], std::to_string(config.seed + k));
}

void density_command(const ExperimentConfig& config, Csv& csv) {
  std::vector<double> history;
  if (config.input) {
    history = load_reals(config);
  } else {
    history = sources::SourceModel::parse(*config.source).sample_reals(config.n, config.seed);
  }
  const npd::NpdConfig npd = config.npd_config();
  const npd::Predictor predictor(history, npd);
  csv.comment("history", std::to_string(history.size()));
  csv.comment("rmax_resolved", std::to_string(predictor.max_level()));
  csv.row({"x", "predictive_density"});
  constexpr double kLow = 0.001;
  constexpr double kHigh = 0.999;
  for (std::size_t j = 0; j < config.grid; ++j) {
    const double u = kLow + (kHigh - kLow) * static_cast<double>(j) / static_cast<double>(config.grid - 1);
    const double x = npd.reference.quantile(u);
    csv.row({format_double(x), format_double(predictor.density(x))});
  }
}

predict::CesaroMeasure cesaro_over_ppm(const ExperimentConfig& config, Alphabet alphabet) {
  return predict::CesaroMeasure(std::make_shared<ppm::PpmMixture>(alphabet, config.ppm_options()),
                                config.cesaro_cap);
}

void predict_command(const ExperimentConfig& config, Csv& csv) {
  csv.row({"n", "mistake_density", "bayes_density", "seed"});
  auto emit = [&](const predict::PredictionTrace& trace, std::optional<double> bayes, const std::string& seed) {
    for (std::size_t m : log_grid(trace.size())) {
      csv.row({std::to_string(m), format_double(trace.mistake_density(m)), optional_cell(bayes), seed});
    }
  };
  if (config.input) {
    const SymbolSequence seq = load_symbols(config);
    if (seq.empty()) throw DataError(1, "input holds no symbols");
    emit(predict::run_prediction(seq, cesaro_over_ppm(config, seq.alphabet())), std::nullopt, "");
    return;
  }
  const auto model = sources::SourceModel::parse(*config.source);
  const auto measure = cesaro_over_ppm(config, model.alphabet());
  std::vector<predict::PredictionTrace> traces(config.seeds);
  parallel_for(config.seeds, [&](std::size_t k) {
    traces[k] = predict::run_prediction(model.sample_symbols(config.n, config.seed + k), measure);
  });
  for (std::size_t k = 0; k < config.seeds; ++k) {
    emit(traces[k], model.bayes_error(), std::to_string(config.seed + k));
  }
}

void diagnostic_command(const ExperimentConfig& config, Csv& csv) {
  const auto model = sources::SourceModel::parse(*config.source);
  const auto measure = cesaro_over_ppm(config, model.alphabet());
  csv.row({"n", "mean_log_ratio", "replicas"});
  for (const auto& p : predict::log_ratio_diagnostic(model, measure, log_grid(config.n), config.replicas, config.seed)) {
    csv.row({std::to_string(p.n), format_double(p.mean_log_ratio), std::to_string(p.replicas)});
  }
}

void sample_command(const ExperimentConfig& config, Csv& csv) {
  const auto model = sources::SourceModel::parse(*config.source);
  if (model.is_discrete()) {
    csv.row({"symbol"});
    const SymbolSequence seq = model.sample_symbols(config.n, config.seed);
    for (Symbol s : seq.symbols()) csv.row({std::to_string(s)});
    return;
  }
  csv.row({"x"});
  char buf[64];
  for (double x : model.sample_reals(config.n, config.seed)) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    csv.row({buf});
  }
}

void add_source_options(CLI::App* sub, ExperimentConfig& config, bool with_input) {
  sub->add_option("--source", config.source, "Synthetic source, e.g. fair-coin, iid:p=0.3,0.7, ar1:rho=0.5");
  if (with_input) sub->add_option("--input", config.input, "Data file to read instead of a source");
  sub->add_option("--n", config.n, "Sample length");
  sub->add_option("--seed", config.seed, "Random seed");
}

void add_ppm_options(CLI::App* sub, ExperimentConfig& config) {
  sub->add_option("--smoothing", config.smoothing, "laplace or kt");
  sub->add_option("--weights", config.weights, "Order weights: rational or log");
  sub->add_option("--max-order", config.max_order, "Cap on Markov orders, or none");
}

void add_npd_options(CLI::App* sub, ExperimentConfig& config) {
  sub->add_option("--rmax", config.rmax, "Highest quantization level, or auto");
  sub->add_option("--reference", config.reference, "Reference measure: uniform or gaussian");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  CLI::App app{"Universal measures, densities and predictors", "entroscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("entroscope ") + kVersion);

  auto* entropy = app.add_subcommand("entropy", "Entropy rate estimates on a logarithmic n-grid");
  add_source_options(entropy, config, true);
  entropy->add_option("--alphabet", config.alphabet, "Alphabet size of symbol input");
  entropy->add_option("--seeds", config.seeds, "Number of consecutive seeds");
  add_ppm_options(entropy, config);
  add_npd_options(entropy, config);
  entropy->add_flag("--lebesgue", config.lebesgue, "Report real-valued rates relative to Lebesgue measure");
  entropy->add_flag("--bits", config.bits, "Report bits instead of nats");

  auto* density = app.add_subcommand("density", "Predictive density on a grid of reference quantiles");
  add_source_options(density, config, true);
  add_ppm_options(density, config);
  add_npd_options(density, config);
  density->add_option("--grid", config.grid, "Number of grid points");

  auto* predict = app.add_subcommand("predict", "Mistake density of the Cesaro-mean predictor");
  add_source_options(predict, config, true);
  predict->add_option("--alphabet", config.alphabet, "Alphabet size of symbol input");
  predict->add_option("--seeds", config.seeds, "Number of consecutive seeds");
  add_ppm_options(predict, config);
  predict->add_option("--cesaro-cap", config.cesaro_cap, "Most suffix windows averaged per step");

  auto* diagnostic = app.add_subcommand("diagnostic", "Expected log-ratio against the true conditionals");
  add_source_options(diagnostic, config, false);
  diagnostic->add_option("--replicas", config.replicas, "Monte Carlo replicas");
  add_ppm_options(diagnostic, config);
  diagnostic->add_option("--cesaro-cap", config.cesaro_cap, "Most suffix windows averaged per step");

  auto* sample = app.add_subcommand("sample", "Write a synthetic sample");
  add_source_options(sample, config, false);

  for (auto* sub : {entropy, density, predict, diagnostic, sample}) {
    sub->add_option("--out", config.out, "Output file (default: standard output)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "entroscope " << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "entroscope: " << e.what() << "\n";
    return kExitConfig;
  }

  config.command = app.get_subcommands().front()->get_name();
  if ((config.command == "predict" || config.command == "diagnostic") &&
      app.get_subcommands().front()->count("--max-order") == 0) {
    config.max_order = "16";
  }

  try {
    config.validate();
    Csv csv(config);
    if (config.command == "entropy") entropy_command(config, csv);
    if (config.command == "density") density_command(config, csv);
    if (config.command == "predict") predict_command(config, csv);
    if (config.command == "diagnostic") diagnostic_command(config, csv);
    if (config.command == "sample") sample_command(config, csv);
    if (config.out) {
      std::ofstream file(*config.out, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open output file '" + *config.out + "'");
      file << csv.str();
      if (!file) throw Error("failed writing '" + *config.out + "'");
    } else {
      out << csv.str();
    }
  } catch (const DataError& e) {
    err << "entroscope: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidArgument& e) {
    err << "entroscope: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "entroscope: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace entroscope::cli
