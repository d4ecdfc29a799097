#pragma once

#include <cstddef>

#include "entroscope/ppm.hpp"

/// Serial from-scratch PPM, evaluated literally from the definitions.
/// Cubic in the string length; kept to cross-check the incremental engine.
namespace entroscope::ppm::reference {

LogWeight order_log_prob(const SymbolSequence& seq, std::size_t k, SmoothingRule smoothing);

/// sum_{k<n-1} w_k P_k(seq) + weight_tail(n-1) P_{n-1}(seq).
LogWeight mixture_log_prob(const SymbolSequence& seq, SmoothingRule smoothing,
                           WeightScheme scheme);

/// P(a | history) = PPM(history a) / PPM(history).
ConditionalDistribution mixture_conditional(const SymbolSequence& history,
                                            SmoothingRule smoothing, WeightScheme scheme);

}  // namespace entroscope::ppm::reference
