#include <charconv>
#include <string>

#include "entroscope/cli.hpp"
#include "entroscope/errors.hpp"

namespace entroscope::cli {

namespace {

std::optional<std::size_t> parse_count(const std::string& text) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

bool is_discrete_source(const std::string& spec) { return sources::SourceModel::parse(spec).is_discrete(); }

}  // namespace

void ExperimentConfig::validate() const {
  const bool known = command == "entropy" || command == "density" || command == "predict" ||
                     command == "diagnostic" || command == "sample";
  if (!known) throw InvalidArgument("unknown command '" + command + "'");
  if (command == "diagnostic" || command == "sample") {
    if (!source) throw InvalidArgument(command + " needs --source");
    if (input) throw InvalidArgument(command + " does not read --input");
  } else if (source.has_value() == input.has_value()) {
    throw InvalidArgument("give exactly one of --source or --input");
  }
  smoothing_rule();
  weight_scheme();
  ppm_options();
  max_level();
  reference_measure();
  if (alphabet && *alphabet == 0) throw InvalidArgument("--alphabet must be positive");
  if (seeds == 0) throw InvalidArgument("--seeds must be positive");
  if (replicas == 0) throw InvalidArgument("--replicas must be positive");
  if (cesaro_cap == 0) throw InvalidArgument("--cesaro-cap must be positive");
  if (n == 0 && command != "density") throw InvalidArgument("--n must be positive");
  if (command == "density" && grid < 2) throw InvalidArgument("--grid needs at least 2 points");

  bool discrete = alphabet.has_value();
  if (source) {
    discrete = is_discrete_source(*source);
    if (alphabet) throw InvalidArgument("--alphabet applies to --input data only");
  }
  if ((command == "predict" || command == "diagnostic") && !discrete) {
    throw InvalidArgument(command + " needs finite-alphabet data (a discrete source or --input with --alphabet)");
  }
  if (command == "density" && discrete) throw InvalidArgument("density needs real-valued data");
  if (lebesgue && discrete) throw InvalidArgument("--lebesgue applies to real-valued data only");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("command", command);
  if (source) out.emplace_back("source", sources::SourceModel::parse(*source).spec());
  if (input) out.emplace_back("input", *input);
  if (alphabet) out.emplace_back("alphabet", std::to_string(*alphabet));
  const bool discrete = alphabet.has_value() || (source && is_discrete_source(*source));
  if (source) out.emplace_back("n", std::to_string(n));
  if (source && command != "diagnostic") {
    out.emplace_back("seed", std::to_string(seed));
    if (command != "sample" && command != "density") out.emplace_back("seeds", std::to_string(seeds));
  }
  if (command == "diagnostic") {
    out.emplace_back("seed", std::to_string(seed));
    out.emplace_back("replicas", std::to_string(replicas));
  }
  if (command != "sample") {
    out.emplace_back("smoothing", smoothing);
    out.emplace_back("weights", weights);
    out.emplace_back("max_order", max_order);
  }
  if (!discrete && command != "sample") {
    out.emplace_back("reference", reference);
    out.emplace_back("level_weights", "1/(r+1)-1/(r+2)");
    out.emplace_back("rmax", rmax);
  }
  if (command == "density") out.emplace_back("grid", std::to_string(grid));
  if (command == "predict" || command == "diagnostic") {
    out.emplace_back("cesaro_cap", std::to_string(cesaro_cap));
  }
  if (command == "entropy") {
    out.emplace_back("units", bits ? "bits" : "nats");
    if (!discrete) out.emplace_back("relative_to", lebesgue ? "lebesgue" : "reference");
  }
  if (source) out.emplace_back("rng", "mt19937_64 seeded by splitmix64");
  return out;
}

ppm::SmoothingRule ExperimentConfig::smoothing_rule() const {
  if (smoothing == "laplace") return ppm::SmoothingRule::laplace();
  if (smoothing == "kt") return ppm::SmoothingRule::krichevsky_trofimov();
  throw InvalidArgument("--smoothing must be laplace or kt, not '" + smoothing + "'");
}

ppm::WeightScheme ExperimentConfig::weight_scheme() const {
  if (weights == "rational") return ppm::WeightScheme::kRational;
  if (weights == "log") return ppm::WeightScheme::kLogTelescoping;
  throw InvalidArgument("--weights must be rational or log, not '" + weights + "'");
}

ppm::Options ExperimentConfig::ppm_options() const {
  ppm::Options options;
  options.smoothing = smoothing_rule();
  options.scheme = weight_scheme();
  if (max_order != "none") {
    const auto k = parse_count(max_order);
    if (!k) throw InvalidArgument("--max-order must be a nonnegative integer or none, not '" + max_order + "'");
    options.max_order = *k;
  }
  return options;
}

std::optional<int> ExperimentConfig::max_level() const {
  if (rmax == "auto") return std::nullopt;
  const auto r = parse_count(rmax);
  if (!r || *r < 1 || *r > static_cast<std::size_t>(quantize::kMaxLevel)) {
    throw InvalidArgument("--rmax must be auto or an integer in [1, " + std::to_string(quantize::kMaxLevel) +
                          "], not '" + rmax + "'");
  }
  return static_cast<int>(*r);
}

quantize::ReferenceMeasure ExperimentConfig::reference_measure() const {
  return quantize::ReferenceMeasure::parse(reference);
}

npd::NpdConfig ExperimentConfig::npd_config() const {
  npd::NpdConfig config;
  config.reference = reference_measure();
  config.ppm = ppm_options();
  config.max_level = max_level();
  return config;
}

}  // namespace entroscope::cli
