#include "cpa/cluster_engine.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cpa/parallel.hpp"
#include "prefix_walk.hpp"

namespace cpa {

// ---------------------------------------------------------------- CountGrid

CountGrid::CountGrid(int max_n, int max_q) : max_n_(max_n), max_q_(max_q) {
  if (max_n < 0 || max_q < 0) throw std::invalid_argument("CountGrid: negative bound");
  cells_.resize(static_cast<std::size_t>(max_n + 1) * static_cast<std::size_t>(max_q + 1));
}

std::size_t CountGrid::index(int n, int q) const {
  if (n < 0 || n > max_n_ || q < 0 || q > max_q_) {
    throw std::out_of_range("CountGrid: (" + std::to_string(n) + "," + std::to_string(q) + ") out of range");
  }
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(max_q_ + 1) + static_cast<std::size_t>(q);
}

mpz_class CountGrid::get(int n, int q) const {
  if (n < 0 || n > max_n_ || q < 0 || q > max_q_) return 0;
  return cells_[index(n, q)];
}

// ------------------------------------------------------------------ oracles

namespace {

struct Occurrence {
  int start = 0;  // 1-based, 0 = none
  int pattern = -1;
};

class OracleVisitor {
public:
  OracleVisitor(const PatternCollection& c, int max_n, int max_q)
      : c_(&c),
        max_n_(max_n),
        max_q_(max_q),
        lmax_(c.max_length()),
        occ_(static_cast<std::size_t>(max_n + 1)),
        chains_(static_cast<std::size_t>(max_n + 1) * static_cast<std::size_t>(max_q + 1), 0),
        reach_(static_cast<std::size_t>(max_n + 1), 0),
        counts_(static_cast<std::size_t>(max_n + 1) * static_cast<std::size_t>(max_q + 1), 0) {}

  bool enter(const std::vector<int>& w, bool record) {
    const int i = static_cast<int>(w.size());
    const auto iu = static_cast<std::size_t>(i);
    occ_[iu] = Occurrence{};
    reach_[iu] = reach_[iu - 1];
    const std::span<const int> ws(w);
    for (int pi = 0; pi < c_->size(); ++pi) {
      const Permutation& p = (*c_)[pi];
      const int l = p.size();
      if (l > i) continue;
      if (!same_relative_order(p.entries(), ws.subspan(iu - static_cast<std::size_t>(l)))) continue;
      const int d = i - l + 1;
      occ_[iu] = Occurrence{d, pi};
      std::uint64_t* f = chain_row(i);
      std::fill(f, f + max_q_ + 1, 0);
      if (max_q_ >= 1 && d == 1) f[1] = 1;
      for (int j = i - 1; j >= 1; --j) {
        const Occurrence& o = occ_[static_cast<std::size_t>(j)];
        if (o.start == 0 || o.start >= d || j < d) continue;
        const std::uint64_t* g = chain_row(j);
        for (int q = 2; q <= max_q_; ++q) f[q] += g[q - 1];
      }
      bool extendable = false;
      for (int q = 1; q <= max_q_; ++q) {
        if (record) counts_[iu * static_cast<std::size_t>(max_q_ + 1) + static_cast<std::size_t>(q)] += f[q];
        if (q < max_q_ && f[q] != 0) extendable = true;
      }
      if (extendable) reach_[iu] = i;
      break;  // a reduced collection has at most one occurrence ending here
    }
    return !(i < max_n_ && std::max(1, reach_[iu]) + lmax_ - 1 <= i);
  }

  void leave(int depth) { occ_[static_cast<std::size_t>(depth)] = Occurrence{}; }

  std::uint64_t count(int n, int q) const {
    return counts_[static_cast<std::size_t>(n) * static_cast<std::size_t>(max_q_ + 1) + static_cast<std::size_t>(q)];
  }
  std::span<const Occurrence> occurrences() const { return occ_; }

private:
  std::uint64_t* chain_row(int end) {
    return chains_.data() + static_cast<std::size_t>(end) * static_cast<std::size_t>(max_q_ + 1);
  }
  const std::uint64_t* chain_row(int end) const {
    return chains_.data() + static_cast<std::size_t>(end) * static_cast<std::size_t>(max_q_ + 1);
  }

  const PatternCollection* c_;
  int max_n_;
  int max_q_;
  int lmax_;
  std::vector<Occurrence> occ_;         // by end position
  std::vector<std::uint64_t> chains_;   // by end position, then q
  std::vector<int> reach_;              // by depth
  std::vector<std::uint64_t> counts_;   // by (n, q)
};

class ListingVisitor {
public:
  ListingVisitor(const PatternCollection& c, int n, int q, std::vector<Cluster>& out)
      : base_(c, n, q), c_(&c), n_(n), q_(q), out_(&out) {}

  bool enter(const std::vector<int>& w, bool record) {
    const bool descend = base_.enter(w, record);
    if (static_cast<int>(w.size()) == n_) collect(w);
    return descend;
  }
  void leave(int depth) { base_.leave(depth); }

private:
  void collect(const std::vector<int>& w) {
    if (base_.count(n_, q_) == seen_) return;
    seen_ = base_.count(n_, q_);
    std::vector<int> ends;
    ends.reserve(static_cast<std::size_t>(q_));
    extend(w, 0, ends);
  }

  void extend(const std::vector<int>& w, int last_end, std::vector<int>& ends) {
    const auto occ = base_.occurrences();
    if (static_cast<int>(ends.size()) == q_) {
      if (last_end != n_) return;
      Cluster cl{Permutation(w), {}, {}};
      for (int e : ends) {
        const Occurrence& o = occ[static_cast<std::size_t>(e)];
        cl.patterns.push_back((*c_)[o.pattern]);
        cl.offsets.push_back(o.start);
      }
      out_->push_back(std::move(cl));
      return;
    }
    for (int e = last_end + 1; e <= n_; ++e) {
      const Occurrence& o = occ[static_cast<std::size_t>(e)];
      if (o.start == 0) continue;
      if (ends.empty()) {
        if (o.start != 1) continue;
      } else {
        const Occurrence& prev = occ[static_cast<std::size_t>(ends.back())];
        if (o.start <= prev.start || o.start > last_end) continue;
      }
      ends.push_back(e);
      extend(w, e, ends);
      ends.pop_back();
    }
  }

  OracleVisitor base_;
  const PatternCollection* c_;
  int n_;
  int q_;
  std::vector<Cluster>* out_;
  std::uint64_t seen_ = 0;
};

}  // namespace

std::vector<Cluster> enumerate_clusters_oracle(const PatternCollection& collection, int n, int q) {
  if (n < 1 || q < 1) throw std::invalid_argument("enumerate_clusters_oracle: need n >= 1 and q >= 1");
  std::vector<Cluster> out;
  ListingVisitor vis(collection, n, q, out);
  detail::PrefixState s;
  detail::walk_subtree(s, n, vis);
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    return a.offsets < b.offsets;
  });
  return out;
}

CountGrid count_clusters_oracle(const PatternCollection& collection, int max_n, int max_q, unsigned threads) {
  if (max_n < 0 || max_q < 0) throw std::invalid_argument("count_clusters_oracle: negative bound");
  if (max_n > 20) throw std::invalid_argument("count_clusters_oracle: n too large for exhaustive search");
  CountGrid grid(max_n, max_q);
  if (max_n >= 1) grid.at(1, 0) = 1;
  detail::parallel_walk(
      max_n, threads, [&] { return OracleVisitor(collection, max_n, max_q); },
      [&](const OracleVisitor& v) {
        for (int n = 1; n <= max_n; ++n) {
          for (int q = 1; q <= max_q; ++q) {
            const std::uint64_t c = v.count(n, q);
            if (c != 0) grid.at(n, q) += mpz_class(static_cast<unsigned long>(c));
          }
        }
      });
  return grid;
}

// ------------------------------------------------------------ LinkageProfile

LinkageProfile linkage_profile(const OverlapGraph& g, int edge_index) {
  const Edge& e = g.edges()[static_cast<std::size_t>(edge_index)];
  const Permutation& pi = g.collection()[e.pattern];
  const int l = pi.size();
  const int k = e.prefix_len;
  const int kt = e.suffix_len;
  LinkageProfile p;
  p.edge = edge_index;
  p.k = k;
  p.k_target = kt;
  p.length = l;
  p.disjoint = l > k + kt;
  std::vector<int> positions;
  if (p.disjoint) {
    for (int i = 1; i <= k; ++i) positions.push_back(i);
    for (int i = l - kt + 1; i <= l; ++i) positions.push_back(i);
  } else {
    for (int i = 1; i <= l; ++i) positions.push_back(i);
  }
  std::vector<int> values;
  for (int pos : positions) values.push_back(pi(pos));
  p.pi_tilde = standardize(values);
  const Permutation inv_perm = inverse(p.pi_tilde);
  const auto inv = inv_perm.entries();
  p.psi.assign(inv.begin(), inv.end());
  for (int j : p.psi) p.psi_bar.push_back(positions[static_cast<std::size_t>(j - 1)]);
  for (int pos : p.psi_bar) p.sorted_values.push_back(pi(pos));
  return p;
}

// ------------------------------------------------------------- ClusterTable

ClusterTable::ClusterTable(std::vector<Permutation> vertices, int max_n, int max_q, bool refined)
    : vertices_(std::move(vertices)), max_n_(max_n), max_q_(max_q), refined_(refined) {
  if (max_n < 0 || max_q < 0) throw std::invalid_argument("ClusterTable: negative bound");
  const std::size_t cells = vertices_.size() * static_cast<std::size_t>(max_n + 1) * static_cast<std::size_t>(max_q + 1);
  totals_.resize(cells);
  if (refined_) rows_.resize(cells);
}

std::size_t ClusterTable::index(int v, int n, int q) const {
  if (v < 0 || v >= vertex_count() || n < 0 || n > max_n_ || q < 0 || q > max_q_) {
    throw std::out_of_range("ClusterTable: cell out of range");
  }
  return (static_cast<std::size_t>(v) * static_cast<std::size_t>(max_n_ + 1) + static_cast<std::size_t>(n)) *
             static_cast<std::size_t>(max_q_ + 1) +
         static_cast<std::size_t>(q);
}

const mpz_class& ClusterTable::total(int v, int n, int q) const { return totals_[index(v, n, q)]; }
mpz_class& ClusterTable::total_ref(int v, int n, int q) { return totals_[index(v, n, q)]; }

std::span<const mpz_class> ClusterTable::refined_row(int v, int n, int q) const {
  if (!refined_) throw std::logic_error("ClusterTable: refined counts were not kept");
  return rows_[index(v, n, q)];
}

void ClusterTable::set_refined_row(int v, int n, int q, std::vector<mpz_class> row) {
  if (!refined_) throw std::logic_error("ClusterTable: refined counts were not kept");
  rows_[index(v, n, q)] = std::move(row);
}

mpz_class ClusterTable::refined(int v, int n, int q, std::span<const int> word) const {
  const auto row = refined_row(v, n, q);
  const Permutation& label = vertices_.at(static_cast<std::size_t>(v));
  if (static_cast<int>(word.size()) != label.size()) return 0;
  std::vector<int> sorted(word.begin(), word.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 1 || sorted.back() > n) return 0;
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;
  if (standardize(word) != label) return 0;
  if (row.empty()) return 0;
  const SubsetIndexer idx(n);
  const auto r = idx.rank(sorted);
  return r < row.size() ? row[r] : mpz_class(0);
}

// ------------------------------------------------------------ recurrences

namespace {

// Precomputed edge data used by both engines.
struct Kernel {
  bool disjoint = false;
  int k = 0;           // source word length
  int kt = 0;          // target word length
  int l = 0;
  int s = 0;           // number of chosen values: k + k' or l
  std::vector<int> word_slot;   // p_i = c[word_slot[i]]
  std::vector<int> a;           // sorted pattern values (disjoint case)
  std::vector<int> target_src;  // u_j = p[target_src[j]] + target_shift[j]
  std::vector<int> target_shift;
  bool terminal_only = false;   // target overlap >= l, only pattern (1)
};

Kernel make_kernel(const Permutation& pi, int k, int kt, const Permutation& target) {
  Kernel K;
  K.k = k;
  K.kt = kt;
  K.l = pi.size();
  K.disjoint = K.l > k + kt;
  K.terminal_only = kt >= K.l;
  const int l = K.l;
  if (K.disjoint) {
    K.s = k + kt;
    std::vector<int> vals;
    for (int i = 1; i <= k; ++i) vals.push_back(pi(i));
    for (int i = l - kt + 1; i <= l; ++i) vals.push_back(pi(i));
    const Permutation tilde = standardize(vals);
    for (int x : tilde.entries()) K.word_slot.push_back(x - 1);
    K.a = vals;
    std::sort(K.a.begin(), K.a.end());
    for (int j = 1; j <= kt; ++j) {
      K.target_src.push_back(k + j - 1);
      K.target_shift.push_back(target(j) - pi(l - kt + j));
    }
  } else {
    K.s = l;
    for (int x : pi.entries()) K.word_slot.push_back(x - 1);
    for (int j = 1; j <= kt; ++j) {
      K.target_src.push_back(l - kt + j - 1);
      K.target_shift.push_back(target(j) - pi(l - kt + j));
    }
  }
  return K;
}

class BinomialTable {
public:
  explicit BinomialTable(int max_n) : w_(max_n + 1), t_(static_cast<std::size_t>(w_ * w_)) {
    for (int n = 0; n <= max_n; ++n) {
      for (int m = 0; m <= n; ++m) t_[static_cast<std::size_t>(n * w_ + m)] = binomial(n, m);
    }
  }
  // Caller guarantees 0 <= m <= n <= max_n.
  const mpz_class& operator()(int n, int m) const { return t_[static_cast<std::size_t>(n * w_ + m)]; }

private:
  int w_;
  std::vector<mpz_class> t_;
};

// Adds the contribution of one edge to `row` (indexed by the rank of the
// source word's value set) for clusters of length n, given the target row at
// length n - l + k'.
void accumulate(const Kernel& K, int n, std::span<const mpz_class> target, const SubsetIndexer& idx,
                const BinomialTable& binom, std::vector<mpz_class>& row) {
  const int s = K.s;
  if (s > n) return;
  const int n_target = n - K.l + K.kt;
  std::vector<int> c(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) c[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> p(static_cast<std::size_t>(s));
  std::vector<int> src(static_cast<std::size_t>(K.k));
  std::vector<int> dst(static_cast<std::size_t>(K.kt));
  mpz_class prod;
  do {
    if (K.disjoint) {
      // Entries below c_1, between consecutive c's and above c_s must leave
      // room for the pattern's values in the corresponding gaps.
      bool ok = c[0] >= K.a[0] && n - c[static_cast<std::size_t>(s - 1)] >= K.l - K.a[static_cast<std::size_t>(s - 1)];
      for (int j = 1; ok && j < s; ++j) {
        ok = c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j - 1)] >=
             K.a[static_cast<std::size_t>(j)] - K.a[static_cast<std::size_t>(j - 1)];
      }
      if (!ok) continue;
    }
    for (int i = 0; i < s; ++i) p[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(K.word_slot[static_cast<std::size_t>(i)])];
    bool in_range = true;
    for (int j = 0; j < K.kt; ++j) {
      const int u = p[static_cast<std::size_t>(K.target_src[static_cast<std::size_t>(j)])] + K.target_shift[static_cast<std::size_t>(j)];
      if (u < 1 || u > n_target) {
        in_range = false;
        break;
      }
      dst[static_cast<std::size_t>(j)] = u;
    }
    if (!in_range) continue;
    std::sort(dst.begin(), dst.end());
    const auto trank = idx.rank(dst);
    if (trank >= target.size() || target[trank] == 0) continue;
    for (int i = 0; i < K.k; ++i) src[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    std::sort(src.begin(), src.end());
    const auto srank = idx.rank(src);
    if (K.disjoint) {
      prod = binom(c[0] - 1, K.a[0] - 1);
      for (int j = 1; j < s; ++j) {
        prod *= binom(c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j - 1)] - 1,
                      K.a[static_cast<std::size_t>(j)] - K.a[static_cast<std::size_t>(j - 1)] - 1);
      }
      prod *= binom(n - c[static_cast<std::size_t>(s - 1)], K.l - K.a[static_cast<std::size_t>(s - 1)]);
      prod *= target[trank];
      row[srank] += prod;
    } else {
      row[srank] += target[trank];
    }
  } while (next_subset(c, n));
}

using Level = std::vector<std::vector<mpz_class>>;  // [vertex * (N+1) + n] -> row

bool all_zero(const std::vector<mpz_class>& row) {
  return std::all_of(row.begin(), row.end(), [](const mpz_class& x) { return x == 0; });
}

void check_bounds(int max_n, int max_q) {
  if (max_n < 1 || max_q < 0) throw std::invalid_argument("cluster_counts: need max_n >= 1 and max_q >= 0");
  if (max_n > 60) throw std::invalid_argument("cluster_counts: max_n above 60 is not supported");
}

}  // namespace

ClusterTable cluster_counts(const OverlapGraph& g, int max_n, int max_q, const EngineOptions& opts) {
  check_bounds(max_n, max_q);
  const int V = g.vertex_count();
  const auto N1 = static_cast<std::size_t>(max_n + 1);
  std::vector<Permutation> verts(g.vertices().begin(), g.vertices().end());
  ClusterTable table(verts, max_n, max_q, opts.keep_refined);
  const SubsetIndexer idx(max_n);
  const BinomialTable binom(max_n);

  std::vector<Kernel> kernels;
  for (const Edge& e : g.edges()) {
    kernels.push_back(make_kernel(g.collection()[e.pattern], e.prefix_len, e.suffix_len, g.vertex(e.target)));
  }

  Level prev(static_cast<std::size_t>(V) * N1);
  prev[static_cast<std::size_t>(OverlapGraph::distinguished()) * N1 + 1] = {mpz_class(1)};
  table.total_ref(OverlapGraph::distinguished(), 1, 0) = 1;
  if (opts.keep_refined) table.set_refined_row(OverlapGraph::distinguished(), 1, 0, {mpz_class(1)});

  for (int q = 1; q <= max_q; ++q) {
    Level cur(static_cast<std::size_t>(V) * N1);
    parallel_for(static_cast<std::size_t>(V) * N1, opts.threads, [&](std::size_t cell) {
      const int v = static_cast<int>(cell / N1);
      const int n = static_cast<int>(cell % N1);
      const int k = g.vertex(v).size();
      if (n < k || n < 1) return;
      std::vector<mpz_class> row(static_cast<std::size_t>(idx.choose(n, k)));
      bool touched = false;
      for (int ei : g.out_edges(v)) {
        const Edge& e = g.edges()[static_cast<std::size_t>(ei)];
        const Kernel& K = kernels[static_cast<std::size_t>(ei)];
        if (K.terminal_only && q > 1) continue;
        const int nt = n - K.l + K.kt;
        if (nt < 1) continue;
        const auto& target = prev[static_cast<std::size_t>(e.target) * N1 + static_cast<std::size_t>(nt)];
        if (target.empty()) continue;
        accumulate(K, n, target, idx, binom, row);
        touched = true;
      }
      if (touched && !all_zero(row)) cur[cell] = std::move(row);
    });
    for (int v = 0; v < V; ++v) {
      for (int n = 0; n <= max_n; ++n) {
        auto& row = cur[static_cast<std::size_t>(v) * N1 + static_cast<std::size_t>(n)];
        if (row.empty()) continue;
        mpz_class sum = 0;
        for (const auto& x : row) sum += x;
        table.total_ref(v, n, q) = sum;
        if (opts.keep_refined) table.set_refined_row(v, n, q, row);
      }
    }
    prev = std::move(cur);
  }
  return table;
}

ClusterTable cluster_counts(const PatternCollection& collection, int max_n, int max_q, const EngineOptions& opts) {
  return cluster_counts(OverlapGraph(collection), max_n, max_q, opts);
}

ClusterTable cluster_counts_single_pattern(const Permutation& pi, int max_n, int max_q, const EngineOptions& opts) {
  check_bounds(max_n, max_q);
  const int l = pi.size();
  std::vector<int> ks{1};
  for (int k : overlap_lengths(pi, pi)) {
    if (k > 1) ks.push_back(k);
  }
  const int d = static_cast<int>(ks.size());
  const int k = ks.back();
  std::vector<Permutation> verts;
  for (int ks_ : ks) verts.push_back(prefix_pattern(pi, ks_));
  const Permutation& top = verts.back();
  ClusterTable table(verts, max_n, max_q, opts.keep_refined);
  const SubsetIndexer idx(max_n);
  const BinomialTable binom(max_n);
  const auto N1 = static_cast<std::size_t>(max_n + 1);

  // One kernel per self-overlap k_s: the source is the longest overlap prefix.
  std::vector<Kernel> kernels;
  for (int s = 0; s < d; ++s) kernels.push_back(make_kernel(pi, k, ks[static_cast<std::size_t>(s)], verts[static_cast<std::size_t>(s)]));

  // marg[s][n]: clusters counted by their first k_s entries.
  auto marginalize = [&](const std::vector<std::vector<mpz_class>>& T) {
    std::vector<std::vector<std::vector<mpz_class>>> marg(static_cast<std::size_t>(d), std::vector<std::vector<mpz_class>>(N1));
    std::vector<int> c(static_cast<std::size_t>(k));
    std::vector<int> w(static_cast<std::size_t>(k));
    for (int n = k; n <= max_n; ++n) {
      const auto& row = T[static_cast<std::size_t>(n)];
      if (row.empty()) continue;
      for (int s = 0; s < d; ++s) {
        marg[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)].assign(
            static_cast<std::size_t>(idx.choose(n, ks[static_cast<std::size_t>(s)])), 0);
      }
      for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i + 1;
      do {
        const auto r = idx.rank(c);
        if (row[r] == 0) continue;
        for (int i = 0; i < k; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(top(i + 1) - 1)];
        for (int s = 0; s < d; ++s) {
          std::vector<int> head(w.begin(), w.begin() + ks[static_cast<std::size_t>(s)]);
          std::sort(head.begin(), head.end());
          marg[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)][idx.rank(head)] += row[r];
        }
      } while (next_subset(c, n));
    }
    return marg;
  };

  std::vector<std::vector<std::vector<mpz_class>>> marg(static_cast<std::size_t>(d), std::vector<std::vector<mpz_class>>(N1));
  marg[0][1] = {mpz_class(1)};
  table.total_ref(0, 1, 0) = 1;
  if (opts.keep_refined) table.set_refined_row(0, 1, 0, {mpz_class(1)});

  for (int q = 1; q <= max_q; ++q) {
    std::vector<std::vector<mpz_class>> T(N1);
    parallel_for(N1, opts.threads, [&](std::size_t nu) {
      const int n = static_cast<int>(nu);
      if (n < k || n < 1) return;
      std::vector<mpz_class> row(static_cast<std::size_t>(idx.choose(n, k)));
      bool touched = false;
      for (int s = 0; s < d; ++s) {
        const Kernel& K = kernels[static_cast<std::size_t>(s)];
        if (K.terminal_only && q > 1) continue;
        const int nt = n - l + ks[static_cast<std::size_t>(s)];
        if (nt < 1) continue;
        const auto& target = marg[static_cast<std::size_t>(s)][static_cast<std::size_t>(nt)];
        if (target.empty()) continue;
        accumulate(K, n, target, idx, binom, row);
        touched = true;
      }
      if (touched && !all_zero(row)) T[nu] = std::move(row);
    });
    marg = marginalize(T);
    for (int s = 0; s < d; ++s) {
      for (int n = 0; n <= max_n; ++n) {
        auto& row = marg[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)];
        if (row.empty()) continue;
        if (all_zero(row)) {
          row.clear();
          continue;
        }
        mpz_class sum = 0;
        for (const auto& x : row) sum += x;
        table.total_ref(s, n, q) = sum;
        if (opts.keep_refined) table.set_refined_row(s, n, q, row);
      }
    }
  }
  return table;
}

CountGrid table_totals(const ClusterTable& table) {
  CountGrid grid(table.max_n(), table.max_q());
  for (int n = 0; n <= table.max_n(); ++n) {
    for (int q = 0; q <= table.max_q(); ++q) grid.at(n, q) = table.total(0, n, q);
  }
  return grid;
}

std::string totals_to_tsv(const CountGrid& grid) {
  std::ostringstream os;
  os << "n\tq\tcl\n";
  for (int n = 0; n <= grid.max_n(); ++n) {
    for (int q = 0; q <= grid.max_q(); ++q) {
      os << n << '\t' << q << '\t' << grid(n, q).get_str() << '\n';
    }
  }
  return os.str();
}

CountGrid parse_totals_tsv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "n\tq\tcl") throw std::invalid_argument("totals TSV: missing header");
  std::vector<std::tuple<int, int, mpz_class>> rows;
  int max_n = 0;
  int max_q = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int n = 0;
    int q = 0;
    std::string value;
    if (!(ls >> n >> q >> value) || n < 0 || q < 0) throw std::invalid_argument("totals TSV: malformed row '" + line + "'");
    mpz_class v;
    if (v.set_str(value, 10) != 0) throw std::invalid_argument("totals TSV: malformed count '" + value + "'");
    max_n = std::max(max_n, n);
    max_q = std::max(max_q, q);
    rows.emplace_back(n, q, v);
  }
  CountGrid grid(max_n, max_q);
  for (auto& [n, q, v] : rows) grid.at(n, q) = v;
  return grid;
}

}  // namespace cpa
