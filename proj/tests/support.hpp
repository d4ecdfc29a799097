#pragma once

#include <string>

#include "entroscope/symbols.hpp"
#include "oracles.hpp"

namespace support {

inline entroscope::SymbolSequence sequence(unsigned alphabet, const oracle::Word& w) {
  return entroscope::SymbolSequence(entroscope::Alphabet(alphabet),
                                    std::vector<entroscope::Symbol>(w.begin(), w.end()));
}

/// "0110" over the given alphabet.
inline entroscope::SymbolSequence digits(const std::string& text, unsigned alphabet = 2) {
  oracle::Word w;
  for (char c : text) w.push_back(static_cast<unsigned>(c - '0'));
  return sequence(alphabet, w);
}

}  // namespace support
