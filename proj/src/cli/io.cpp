#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "entroscope/cli.hpp"
#include "entroscope/errors.hpp"

namespace entroscope::cli {

namespace {

/// Calls `on_line(line_number, text)` for every data line.
template <class OnLine>
void for_each_data_line(std::istream& in, const std::string& header, OnLine&& on_line) {
  std::string line;
  std::size_t number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t");
    const std::string text = line.substr(begin, end - begin + 1);
    if (first && text == header) {
      first = false;
      continue;
    }
    first = false;
    on_line(number, text);
  }
}

}  // namespace

SymbolSequence read_symbols(std::istream& in, Alphabet alphabet) {
  std::vector<Symbol> symbols;
  for_each_data_line(in, "symbol", [&](std::size_t line, const std::string& text) {
    std::istringstream tokens(text);
    std::string token;
    while (tokens >> token) {
      std::uint64_t v = 0;
      const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || end != token.data() + token.size()) {
        throw DataError(line, "expected a nonnegative integer symbol, got '" + token + "'");
      }
      if (v >= alphabet.size()) {
        throw DataError(line, "symbol " + token + " outside alphabet of size " + std::to_string(alphabet.size()));
      }
      symbols.push_back(static_cast<Symbol>(v));
    }
  });
  return SymbolSequence(alphabet, std::move(symbols));
}

std::vector<double> read_reals(std::istream& in, std::vector<std::size_t>* lines) {
  std::vector<double> xs;
  for_each_data_line(in, "x", [&](std::size_t line, const std::string& text) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
      throw DataError(line, "expected one finite real number, got '" + text + "'");
    }
    xs.push_back(v);
    if (lines) lines->push_back(line);
  });
  return xs;
}

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace entroscope::cli
