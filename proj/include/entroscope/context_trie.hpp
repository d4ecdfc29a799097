#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entroscope/symbols.hpp"

namespace entroscope::ppm {

/// Occurrence counts N(context, symbol) over a growing string.
///
/// Position i (1-based) contributes one occurrence to every full-length
/// context x_{i-d..i-1} with d <= i-1, keyed by the symbol x_i. Contexts are
/// stored as a trie over preceding symbols, most recent first. A context seen
/// exactly once is kept as a lazy leaf: only its position is recorded and the
/// deeper contexts of that position are compared against the data on demand,
/// so storage grows with the total match length rather than with n^2.
///
/// With `track_positions` every count also keeps its sorted occurrence
/// positions, which lets one trie serve counts for any suffix window.
class ContextTrie {
 public:
  struct Options {
    /// Longest context stored; unbounded when empty.
    std::optional<std::size_t> max_depth;
    bool track_positions = false;
  };

  /// The context of one depth on the path preceding the next position.
  struct PathStep {
    std::uint32_t node = 0;
    /// Nonzero when the context has occurred once, at this position.
    std::uint32_t leaf_position = 0;
  };

  ContextTrie(Alphabet alphabet, Options options);

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const Symbol> data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  const std::optional<std::size_t>& max_depth() const { return options_.max_depth; }
  bool tracks_positions() const { return options_.track_positions; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Records x_{size()+1} = s and its occurrence in every preceding context.
  void append(Symbol s);

  /// Contexts of depth 0, 1, ... preceding position size()+1 that have at
  /// least one occurrence, stopping at the first unseen context or after
  /// `depth_limit`. out[d] is the context of length d.
  void context_path(std::size_t depth_limit, std::vector<PathStep>& out) const;

  /// Visits (symbol, count) for every symbol that followed the path context
  /// of length `depth` at a position >= window_start + depth, the counts a
  /// suffix window starting at `window_start` sees. Returns the total count.
  /// Windows other than start 1 require position tracking.
  template <class Visitor>
  std::uint32_t visit_counts(const PathStep& step, std::size_t depth, std::size_t window_start,
                             Visitor&& visit) const;

  /// Count of one symbol at a path step, under the same window rule.
  std::uint32_t count_of(const PathStep& step, std::size_t depth, std::size_t window_start,
                         Symbol symbol) const;
  /// Total count at a path step, under the same window rule.
  std::uint32_t total(const PathStep& step, std::size_t depth, std::size_t window_start) const;

  /// Counts following an explicit context (oldest symbol first), all
  /// positions included.
  std::vector<std::pair<Symbol, std::uint32_t>> counts(std::span<const Symbol> context) const;

 private:
  struct Entry {
    Symbol symbol;
    std::uint32_t count;
  };

  struct Node {
    std::vector<Entry> entries;  // sorted by symbol
    std::vector<std::vector<std::uint32_t>> positions;  // parallel to entries when tracking
    std::vector<std::pair<Symbol, std::uint32_t>> children;  // sorted by preceding symbol
    std::uint32_t total = 0;
    std::uint32_t leaf_position = 0;
  };

  Symbol at(std::size_t position) const { return data_[position - 1]; }
  /// Number of positions >= min_position in a sorted list.
  static std::uint32_t count_from(const std::vector<std::uint32_t>& pos, std::size_t min_position);
  std::optional<std::uint32_t> find_child(const Node& node, Symbol preceding) const;
  std::uint32_t new_leaf(std::uint32_t parent, Symbol preceding, std::uint32_t position);
  void add_occurrence(std::uint32_t node, Symbol s, std::uint32_t position);
  void split_leaf(std::uint32_t node, std::size_t depth);
  bool can_extend(std::size_t depth) const {
    return !options_.max_depth || depth + 1 <= *options_.max_depth;
  }

  Alphabet alphabet_;
  Options options_;
  std::vector<Symbol> data_;
  std::vector<Node> nodes_;
};

template <class Visitor>
std::uint32_t ContextTrie::visit_counts(const PathStep& step, std::size_t depth,
                                        std::size_t window_start, Visitor&& visit) const {
  const std::size_t min_position = window_start + depth;
  if (step.leaf_position != 0) {
    if (step.leaf_position < min_position) return 0;
    visit(at(step.leaf_position), std::uint32_t{1});
    return 1;
  }
  const Node& node = nodes_[step.node];
  std::uint32_t total = 0;
  // Every occurrence of a depth-d context sits at position >= d + 1.
  if (min_position <= depth + 1) {
    for (const Entry& e : node.entries) {
      visit(e.symbol, e.count);
      total += e.count;
    }
    return total;
  }
  for (std::size_t k = 0; k < node.entries.size(); ++k) {
    const std::uint32_t c = count_from(node.positions[k], min_position);
    if (c != 0) {
      visit(node.entries[k].symbol, c);
      total += c;
    }
  }
  return total;
}

inline std::uint32_t ContextTrie::count_from(const std::vector<std::uint32_t>& pos,
                                             std::size_t min_position) {
  // Branch-free lower bound; this search dominates suffix-window evaluation.
  const std::uint32_t* base = pos.data();
  std::size_t len = pos.size();
  if (len == 0 || pos.back() < min_position) return 0;
  while (len > 1) {
    const std::size_t half = len / 2;
    base = base[half - 1] < min_position ? base + half : base;
    len -= half;
  }
  return static_cast<std::uint32_t>(pos.data() + pos.size() - base);
}

}  // namespace entroscope::ppm
