#pragma once

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cpa/combinatorics.hpp"
#include "cpa/overlap_graph.hpp"
#include "cpa/permutation.hpp"

namespace cpa {

struct Cluster {
  Permutation sigma;
  std::vector<Permutation> patterns;
  std::vector<int> offsets;  // 1-based starting positions d_1 < ... < d_q

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Dense table of big integers indexed by (n, q), 0 <= n <= max_n, 0 <= q <= max_q.
class CountGrid {
public:
  CountGrid() = default;
  CountGrid(int max_n, int max_q);

  int max_n() const noexcept { return max_n_; }
  int max_q() const noexcept { return max_q_; }
  const mpz_class& operator()(int n, int q) const { return cells_.at(index(n, q)); }
  mpz_class& at(int n, int q) { return cells_.at(index(n, q)); }
  // Zero outside the stored range.
  mpz_class get(int n, int q) const;

  friend bool operator==(const CountGrid&, const CountGrid&) = default;

private:
  std::size_t index(int n, int q) const;
  int max_n_ = -1;
  int max_q_ = -1;
  std::vector<mpz_class> cells_;
};

// Exhaustive oracles straight from the cluster definition.
std::vector<Cluster> enumerate_clusters_oracle(const PatternCollection& collection, int n, int q);
// Number of q-clusters of length n for all n <= max_n, q <= max_q, including
// the fictitious 0-cluster at (1, 0).
CountGrid count_clusters_oracle(const PatternCollection& collection, int max_n, int max_q, unsigned threads = 0);

// Data attached to an edge v -> v' coming from pattern pi with prefix length k
// and suffix length k'.
struct LinkageProfile {
  int edge = 0;
  bool disjoint = false;         // l > k + k'
  int k = 0;
  int k_target = 0;
  int length = 0;
  Permutation pi_tilde{1};       // st of the first k and last k' entries (disjoint case)
  std::vector<int> psi;          // inverse of pi_tilde
  std::vector<int> psi_bar;      // positions of pi holding the sorted values
  std::vector<int> sorted_values;  // pi(psi_bar(1)) < ... < pi(psi_bar(k+k'))
};

LinkageProfile linkage_profile(const OverlapGraph& g, int edge_index);

struct EngineOptions {
  unsigned threads = 0;  // 0 = all cores
  bool keep_refined = true;
};

// Cluster counts cl_{v,n,q} for every vertex of an overlap graph, optionally
// refined by the initial word p = (p_1..p_k), k = |v|.  Since st[p] = v, a word
// is determined by its value set, stored by colex rank.
class ClusterTable {
public:
  ClusterTable(std::vector<Permutation> vertices, int max_n, int max_q, bool refined);

  std::span<const Permutation> vertices() const noexcept { return vertices_; }
  int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
  int max_n() const noexcept { return max_n_; }
  int max_q() const noexcept { return max_q_; }
  bool has_refined() const noexcept { return refined_; }

  const mpz_class& total(int v, int n, int q) const;
  mpz_class& total_ref(int v, int n, int q);
  // Refined row for (v, n, q); empty when every entry is zero.
  std::span<const mpz_class> refined_row(int v, int n, int q) const;
  void set_refined_row(int v, int n, int q, std::vector<mpz_class> row);
  // cl_{v,n,q}[word]; zero when st[word] != v or the word leaves {1..n}.
  mpz_class refined(int v, int n, int q, std::span<const int> word) const;

private:
  std::size_t index(int v, int n, int q) const;
  std::vector<Permutation> vertices_;
  int max_n_;
  int max_q_;
  bool refined_;
  std::vector<mpz_class> totals_;
  std::vector<std::vector<mpz_class>> rows_;
};

ClusterTable cluster_counts(const PatternCollection& collection, int max_n, int max_q, const EngineOptions& opts = {});
ClusterTable cluster_counts(const OverlapGraph& graph, int max_n, int max_q, const EngineOptions& opts = {});
ClusterTable cluster_counts_single_pattern(const Permutation& pattern, int max_n, int max_q,
                                           const EngineOptions& opts = {});

// cl_{n,q} = cl_{(1),n,q}.
CountGrid table_totals(const ClusterTable& table);

std::string totals_to_tsv(const CountGrid& grid);
CountGrid parse_totals_tsv(const std::string& text);

}  // namespace cpa
