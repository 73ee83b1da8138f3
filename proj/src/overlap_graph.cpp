#include "cpa/overlap_graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cpa {

NotReducedError::NotReducedError(Permutation divisor, Permutation multiple)
    : std::invalid_argument("collection is not reduced: (" + to_string(divisor) + ") divides (" +
                            to_string(multiple) + ")"),
      divisor_(std::move(divisor)),
      multiple_(std::move(multiple)) {}

PatternCollection::PatternCollection(std::vector<Permutation> patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw std::invalid_argument("pattern collection is empty");
  std::sort(patterns_.begin(), patterns_.end());
  if (auto it = std::adjacent_find(patterns_.begin(), patterns_.end()); it != patterns_.end()) {
    throw std::invalid_argument("duplicate pattern (" + to_string(*it) + ")");
  }
  for (const auto& a : patterns_) {
    for (const auto& b : patterns_) {
      if (&a != &b && divides(a, b)) throw NotReducedError(a, b);
    }
  }
}

std::optional<int> PatternCollection::index_of(const Permutation& p) const {
  auto it = std::lower_bound(patterns_.begin(), patterns_.end(), p);
  if (it == patterns_.end() || *it != p) return std::nullopt;
  return static_cast<int>(it - patterns_.begin());
}

int PatternCollection::min_length() const noexcept {
  int m = patterns_.front().size();
  for (const auto& p : patterns_) m = std::min(m, p.size());
  return m;
}

int PatternCollection::max_length() const noexcept {
  int m = 0;
  for (const auto& p : patterns_) m = std::max(m, p.size());
  return m;
}

PatternCollection PatternCollection::reversed() const {
  std::vector<Permutation> out;
  for (const auto& p : patterns_) out.push_back(reverse(p));
  return PatternCollection(std::move(out));
}

PatternCollection PatternCollection::complemented() const {
  std::vector<Permutation> out;
  for (const auto& p : patterns_) out.push_back(complement(p));
  return PatternCollection(std::move(out));
}

PatternCollection reduce_collection(std::vector<Permutation> patterns) {
  if (patterns.empty()) throw std::invalid_argument("pattern collection is empty");
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  std::vector<Permutation> kept;
  for (const auto& p : patterns) {
    bool redundant = false;
    for (const auto& q : patterns) {
      if (q != p && divides(q, p)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(p);
  }
  return PatternCollection(std::move(kept));
}

bool k_overlaps(const Permutation& pi, const Permutation& next, int k) {
  if (k < 1 || k > std::min(pi.size(), next.size())) {
    throw std::out_of_range("k_overlaps: k = " + std::to_string(k) + " out of range");
  }
  return same_relative_order(pi.window(pi.size() - k + 1, k), next.window(1, k));
}

std::vector<int> overlap_lengths(const Permutation& pi, const Permutation& next) {
  std::vector<int> out;
  const int kmax = std::min(pi.size(), next.size());
  for (int k = 1; k < kmax; ++k) {
    if (k_overlaps(pi, next, k)) out.push_back(k);
  }
  return out;
}

std::vector<int> linkage_lengths(const Permutation& pi, const Permutation& next) {
  std::vector<int> out;
  for (int k : overlap_lengths(pi, next)) out.push_back(pi.size() + next.size() - k);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Enumerates the linear extensions of the order on positions 0..n-1 given by
// two chains: positions [0, l) ordered as pi and [n-l', n) ordered as next.
// Values are assigned 1, 2, ... in increasing order.
void extend(int n, const std::vector<std::vector<int>>& below, std::vector<int>& value, int next_value,
            std::vector<Permutation>& out) {
  if (next_value > n) {
    out.emplace_back(value);
    return;
  }
  for (int pos = 0; pos < n; ++pos) {
    if (value[static_cast<std::size_t>(pos)] != 0) continue;
    bool ready = std::all_of(below[static_cast<std::size_t>(pos)].begin(), below[static_cast<std::size_t>(pos)].end(),
                             [&](int b) { return value[static_cast<std::size_t>(b)] != 0; });
    if (!ready) continue;
    value[static_cast<std::size_t>(pos)] = next_value;
    extend(n, below, value, next_value + 1, out);
    value[static_cast<std::size_t>(pos)] = 0;
  }
}

}  // namespace

std::vector<Permutation> enumerate_linkages(const Permutation& pi, const Permutation& next, int n) {
  const int l = pi.size();
  const int l2 = next.size();
  if (n < std::max(l, l2) || n >= l + l2) {
    throw std::out_of_range("enumerate_linkages: n = " + std::to_string(n) + " outside [max(l,l'), l+l')");
  }
  // below[p] = positions that must carry smaller values than position p.
  std::vector<std::vector<int>> below(static_cast<std::size_t>(n));
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (pi(j + 1) < pi(i + 1)) below[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  const int off = n - l2;
  for (int i = 0; i < l2; ++i) {
    for (int j = 0; j < l2; ++j) {
      if (next(j + 1) < next(i + 1)) below[static_cast<std::size_t>(off + i)].push_back(off + j);
    }
  }
  std::vector<int> value(static_cast<std::size_t>(n), 0);
  std::vector<Permutation> out;
  extend(n, below, value, 1, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const EdgeLabel& label) {
  auto set = [](const std::vector<int>& s) {
    std::string r = "{";
    for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
    return r + "}";
  };
  return "(" + set(label.initial) + "," + set(label.final) + ";" + std::to_string(label.length) + ")";
}

OverlapGraph::OverlapGraph(const PatternCollection& collection) : collection_(collection) {
  const auto pats = collection_.patterns();
  vertices_.push_back(Permutation{1});
  for (const auto& a : pats) {
    for (const auto& b : pats) {
      for (int k : overlap_lengths(a, b)) vertices_.push_back(prefix_pattern(b, k));
    }
  }
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());

  for (int pi_idx = 0; pi_idx < collection_.size(); ++pi_idx) {
    const Permutation& pi = pats[static_cast<std::size_t>(pi_idx)];
    const int l = pi.size();
    for (int k = 1; k <= l; ++k) {
      auto src = vertex_index(prefix_pattern(pi, k));
      if (!src) continue;
      for (int k2 = 1; k2 <= l; ++k2) {
        auto dst = vertex_index(suffix_pattern(pi, k2));
        if (!dst) continue;
        Edge e;
        e.source = *src;
        e.target = *dst;
        e.pattern = pi_idx;
        e.prefix_len = k;
        e.suffix_len = k2;
        e.label.length = l;
        e.label.initial.assign(pi.entries().begin(), pi.entries().begin() + k);
        e.label.final.assign(pi.entries().end() - k2, pi.entries().end());
        std::sort(e.label.initial.begin(), e.label.initial.end());
        std::sort(e.label.final.begin(), e.label.final.end());
        edges_.push_back(std::move(e));
      }
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.source, a.target, a.label, a.pattern) < std::tie(b.source, b.target, b.label, b.pattern);
  });
  out_.resize(vertices_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out_[static_cast<std::size_t>(edges_[i].source)].push_back(static_cast<int>(i));
  }
}

std::optional<int> OverlapGraph::vertex_index(const Permutation& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<int>(it - vertices_.begin());
}

std::string graph_to_dot(const OverlapGraph& g) {
  std::ostringstream os;
  os << "digraph overlap {\n";
  for (const auto& v : g.vertices()) os << "  \"" << to_string(v) << "\";\n";
  for (const auto& e : g.edges()) {
    os << "  \"" << to_string(g.vertex(e.source)) << "\" -> \"" << to_string(g.vertex(e.target))
       << "\" [label=\"" << to_string(e.label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cpa
