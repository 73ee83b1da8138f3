#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/permutation.hpp"

namespace cpa {

// Raised when a collection contains a pattern dividing another one.
class NotReducedError : public std::invalid_argument {
public:
  NotReducedError(Permutation divisor, Permutation multiple);
  const Permutation& divisor() const noexcept { return divisor_; }
  const Permutation& multiple() const noexcept { return multiple_; }

private:
  Permutation divisor_;
  Permutation multiple_;
};

// A nonempty reduced set of patterns, kept in shortlex order.
class PatternCollection {
public:
  // Throws std::invalid_argument if empty or containing duplicates and
  // NotReducedError if one pattern divides another.
  explicit PatternCollection(std::vector<Permutation> patterns);
  PatternCollection(std::initializer_list<Permutation> patterns)
      : PatternCollection(std::vector<Permutation>(patterns)) {}

  std::span<const Permutation> patterns() const noexcept { return patterns_; }
  int size() const noexcept { return static_cast<int>(patterns_.size()); }
  const Permutation& operator[](int i) const { return patterns_.at(static_cast<std::size_t>(i)); }
  std::optional<int> index_of(const Permutation& p) const;
  int min_length() const noexcept;
  int max_length() const noexcept;

  PatternCollection reversed() const;
  PatternCollection complemented() const;

  friend bool operator==(const PatternCollection&, const PatternCollection&) = default;

private:
  std::vector<Permutation> patterns_;
};

// Drops every pattern divisible by another one and removes duplicates.
PatternCollection reduce_collection(std::vector<Permutation> patterns);

// st[pi(l-k+1..l)] == st[next(1..k)]; requires 1 <= k <= min(l, l').
bool k_overlaps(const Permutation& pi, const Permutation& next, int k);
// All proper overlap lengths 1 <= k < min(l, l'), increasing.
std::vector<int> overlap_lengths(const Permutation& pi, const Permutation& next);
// Lengths n = l + l' - k of the linkages of the ordered pair, increasing.
std::vector<int> linkage_lengths(const Permutation& pi, const Permutation& next);
// Every sigma of length n whose first l entries standardize to pi and last l'
// entries to next.  Exhaustive construction; test oracle.
std::vector<Permutation> enumerate_linkages(const Permutation& pi, const Permutation& next, int n);

struct EdgeLabel {
  std::vector<int> initial;  // {pi(1), ..., pi(k)}, sorted
  std::vector<int> final;    // {pi(l-k'+1), ..., pi(l)}, sorted
  int length = 0;            // l

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
  friend auto operator<=>(const EdgeLabel& a, const EdgeLabel& b) {
    if (auto c = a.length <=> b.length; c != 0) return c;
    if (auto c = a.initial <=> b.initial; c != 0) return c;
    return a.final <=> b.final;
  }
};

std::string to_string(const EdgeLabel& label);

struct Edge {
  int source = 0;  // vertex index
  int target = 0;  // vertex index
  EdgeLabel label;
  int pattern = 0;      // index into the collection
  int prefix_len = 0;   // k  = length of the source vertex
  int suffix_len = 0;   // k' = length of the target vertex
};

// Labelled overlap graph of a reduced collection.  Vertex 0 is the
// distinguished vertex (1).  Vertices are in shortlex order; edges sorted by
// (source, target, label, pattern).
class OverlapGraph {
public:
  explicit OverlapGraph(const PatternCollection& collection);

  const PatternCollection& collection() const noexcept { return collection_; }
  std::span<const Permutation> vertices() const noexcept { return vertices_; }
  int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
  const Permutation& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }
  std::optional<int> vertex_index(const Permutation& v) const;
  static constexpr int distinguished() noexcept { return 0; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  // Indices of the edges leaving vertex v.
  std::span<const int> out_edges(int v) const { return out_.at(static_cast<std::size_t>(v)); }

private:
  PatternCollection collection_;
  std::vector<Permutation> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
};

inline OverlapGraph build_graph(const PatternCollection& collection) { return OverlapGraph(collection); }

std::string graph_to_dot(const OverlapGraph& g);

}  // namespace cpa
