#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entroscope/npd.hpp"
#include "entroscope/ppm.hpp"
#include "entroscope/quantize.hpp"
#include "entroscope/sources.hpp"
#include "entroscope/symbols.hpp"

/// The `entroscope` command line: configuration, data files and commands.
namespace entroscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct ExperimentConfig {
  std::string command;
  std::optional<std::string> source;
  std::optional<std::string> input;
  std::optional<std::size_t> alphabet;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::string smoothing = "laplace";
  std::string weights = "rational";
  std::string rmax = "auto";
  std::string reference = "uniform";
  std::size_t grid = 64;
  std::size_t replicas = 100;
  /// Markov order cap; "none" keeps the exact infinite mixture.
  std::string max_order = "none";
  std::size_t cesaro_cap = 16;
  bool lebesgue = false;
  bool bits = false;
  std::optional<std::string> out;

  /// Rejects inconsistent combinations for `command`; throws InvalidArgument.
  void validate() const;
  /// (key, value) pairs of the effective configuration, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;

  ppm::SmoothingRule smoothing_rule() const;
  ppm::WeightScheme weight_scheme() const;
  ppm::Options ppm_options() const;
  std::optional<int> max_level() const;
  quantize::ReferenceMeasure reference_measure() const;
  npd::NpdConfig npd_config() const;
};

/// Symbols as whitespace-separated nonnegative integers. Lines starting with
/// '#' are skipped, as is a first line reading `symbol`. Throws DataError.
SymbolSequence read_symbols(std::istream& in, Alphabet alphabet);
/// Reals one per line, with the same comment rules and a `x` header. When
/// `lines` is given it receives the file line of every value.
std::vector<double> read_reals(std::istream& in, std::vector<std::size_t>* lines = nullptr);

/// Fixed-format number for CSV output.
std::string format_double(double x);

/// Runs `entroscope <args...>` (args exclude the program name) and returns
/// the exit code. Diagnostics go to `err`; results go to `out` or --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entroscope::cli
