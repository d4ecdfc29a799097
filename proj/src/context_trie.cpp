#include "entroscope/context_trie.hpp"

#include <limits>
#include <string>

#include "entroscope/errors.hpp"

namespace entroscope::ppm {

ContextTrie::ContextTrie(Alphabet alphabet, Options options)
    : alphabet_(alphabet), options_(options) {
  nodes_.emplace_back();
}

std::optional<std::uint32_t> ContextTrie::find_child(const Node& node, Symbol preceding) const {
  const auto it = std::lower_bound(node.children.begin(), node.children.end(), preceding,
                                   [](const auto& c, Symbol s) { return c.first < s; });
  if (it == node.children.end() || it->first != preceding) return std::nullopt;
  return it->second;
}

std::uint32_t ContextTrie::new_leaf(std::uint32_t parent, Symbol preceding,
                                    std::uint32_t position) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_.back().leaf_position = position;
  auto& children = nodes_[parent].children;
  const auto it = std::lower_bound(children.begin(), children.end(), preceding,
                                   [](const auto& c, Symbol s) { return c.first < s; });
  children.insert(it, {preceding, index});
  return index;
}

void ContextTrie::add_occurrence(std::uint32_t node_index, Symbol s, std::uint32_t position) {
  Node& node = nodes_[node_index];
  const auto it = std::lower_bound(node.entries.begin(), node.entries.end(), s,
                                   [](const Entry& e, Symbol v) { return e.symbol < v; });
  const auto k = static_cast<std::size_t>(it - node.entries.begin());
  if (it == node.entries.end() || it->symbol != s) {
    node.entries.insert(it, Entry{s, 0});
    if (options_.track_positions) {
      node.positions.insert(node.positions.begin() + static_cast<std::ptrdiff_t>(k),
                            std::vector<std::uint32_t>{});
    }
  }
  ++node.entries[k].count;
  ++node.total;
  if (options_.track_positions) node.positions[k].push_back(position);
}

void ContextTrie::split_leaf(std::uint32_t node_index, std::size_t depth) {
  const std::uint32_t p = nodes_[node_index].leaf_position;
  nodes_[node_index].leaf_position = 0;
  add_occurrence(node_index, at(p), p);
  if (p - 1 >= depth + 1 && can_extend(depth)) {
    new_leaf(node_index, at(p - depth - 1), p);
  }
}

void ContextTrie::append(Symbol s) {
  if (!alphabet_.contains(s)) {
    throw InvalidArgument("symbol " + std::to_string(s) + " outside alphabet of size " +
                          std::to_string(alphabet_.size()));
  }
  if (data_.size() >= std::numeric_limits<std::uint32_t>::max() - 1) {
    throw InvalidArgument("context trie holds at most 2^32-2 symbols");
  }
  data_.push_back(s);
  const auto i = static_cast<std::uint32_t>(data_.size());
  std::uint32_t node = 0;
  for (std::size_t depth = 0;; ++depth) {
    if (nodes_[node].leaf_position != 0) split_leaf(node, depth);
    add_occurrence(node, s, i);
    if (depth + 1 > i - 1 || !can_extend(depth)) break;
    const Symbol preceding = at(i - depth - 1);
    const auto child = find_child(nodes_[node], preceding);
    if (!child) {
      new_leaf(node, preceding, i);
      break;
    }
    node = *child;
  }
}

void ContextTrie::context_path(std::size_t depth_limit, std::vector<PathStep>& out) const {
  out.clear();
  const std::size_t i = data_.size() + 1;
  if (data_.empty()) return;
  out.push_back(PathStep{0, 0});
  for (std::size_t depth = 0; depth < depth_limit; ++depth) {
    if (depth + 1 > i - 1 || !can_extend(depth)) break;
    const Symbol preceding = at(i - depth - 1);
    const PathStep cur = out.back();
    if (cur.leaf_position != 0) {
      const std::size_t p = cur.leaf_position;
      if (p - 1 < depth + 1 || at(p - depth - 1) != preceding) break;
      out.push_back(cur);
      continue;
    }
    const auto child = find_child(nodes_[cur.node], preceding);
    if (!child) break;
    out.push_back(PathStep{*child, nodes_[*child].leaf_position});
  }
}

std::uint32_t ContextTrie::count_of(const PathStep& step, std::size_t depth,
                                    std::size_t window_start, Symbol symbol) const {
  const std::size_t min_position = window_start + depth;
  if (step.leaf_position != 0) {
    return step.leaf_position >= min_position && at(step.leaf_position) == symbol ? 1 : 0;
  }
  const Node& node = nodes_[step.node];
  const auto it = std::lower_bound(node.entries.begin(), node.entries.end(), symbol,
                                   [](const Entry& e, Symbol v) { return e.symbol < v; });
  if (it == node.entries.end() || it->symbol != symbol) return 0;
  if (min_position <= depth + 1) return it->count;
  return count_from(node.positions[static_cast<std::size_t>(it - node.entries.begin())], min_position);
}

std::uint32_t ContextTrie::total(const PathStep& step, std::size_t depth,
                                 std::size_t window_start) const {
  if (step.leaf_position == 0 && window_start + depth <= depth + 1) return nodes_[step.node].total;
  return visit_counts(step, depth, window_start, [](Symbol, std::uint32_t) {});
}

std::vector<std::pair<Symbol, std::uint32_t>> ContextTrie::counts(
    std::span<const Symbol> context) const {
  for (Symbol c : context) {
    if (!alphabet_.contains(c)) {
      throw InvalidArgument("context symbol " + std::to_string(c) + " outside alphabet");
    }
  }
  if (options_.max_depth && context.size() > *options_.max_depth) {
    throw InvalidArgument("context longer than the table's order");
  }
  const std::size_t m = context.size();
  std::uint32_t node = 0;
  for (std::size_t depth = 0; depth < m; ++depth) {
    const Symbol preceding = context[m - 1 - depth];
    const std::size_t p = nodes_[node].leaf_position;
    if (p != 0) {
      // A lazy leaf: the single occurrence matches iff the data agrees.
      for (std::size_t e = depth + 1; e <= m; ++e) {
        if (p - 1 < e || at(p - e) != context[m - e]) return {};
      }
      return {{at(p), 1}};
    }
    const auto child = find_child(nodes_[node], preceding);
    if (!child) return {};
    node = *child;
  }
  if (nodes_[node].leaf_position != 0) {
    return {{at(nodes_[node].leaf_position), 1}};
  }
  std::vector<std::pair<Symbol, std::uint32_t>> out;
  for (const Entry& e : nodes_[node].entries) out.emplace_back(e.symbol, e.count);
  return out;
}

}  // namespace entroscope::ppm
