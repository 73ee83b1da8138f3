#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cpa/cluster_engine.hpp"
#include "cpa/overlap_graph.hpp"

namespace cpa {

// Pairs (pi, phi(pi)); must be a bijection between the two collections.
using PatternBijection = std::vector<std::pair<Permutation, Permutation>>;

struct CriterionReport {
  bool lengths = true;
  bool linkages = true;
  bool overlap_sets = true;  // sets, or only their maxima for the monotone form
  std::vector<std::string> failures;

  bool holds() const noexcept { return lengths && linkages && overlap_sets; }
};

// Lengths, linkage lengths of every ordered pair and, for every realized
// overlap, the final k-set of pi and the initial k-set of pi' are preserved.
// Throws std::invalid_argument if phi is not a bijection.
CriterionReport check_overlap_criterion(const PatternCollection& pi1, const PatternCollection& pi2,
                                        const PatternBijection& phi);
// The same with the overlap sets replaced by the maxima of the final sets.
// Throws NotMonotoneError unless both collections are monotone.
CriterionReport check_monotone_criterion(const PatternCollection& pi1, const PatternCollection& pi2,
                                         const PatternBijection& phi);
// Tries every length-preserving bijection.
std::optional<PatternBijection> find_overlap_bijection(const PatternCollection& pi1, const PatternCollection& pi2);
std::optional<PatternBijection> find_monotone_bijection(const PatternCollection& pi1, const PatternCollection& pi2);

// Vertex map g1 -> g2 fixing (1) under which the edge label multisets agree.
std::optional<std::vector<int>> graphs_isomorphic(const OverlapGraph& g1, const OverlapGraph& g2);
// Text form of the graph that is equal for isomorphic graphs and differs
// otherwise.
std::string canonical_graph_form(const OverlapGraph& g);

struct SeriesComparison {
  bool equal = true;
  int order = 0;
  // First (n, q) where alpha_{n,q} differs, with both values.
  std::optional<std::tuple<int, int, mpz_class, mpz_class>> difference;
  bool oracle_checked = false;  // also compared with a full scan up to oracle_n
};

// Equality of alpha_{n,q} for n <= N.  With oracle_n > 0 both sides are also
// checked against a full scan of S_n for n <= oracle_n.
SeriesComparison verify_strong_equivalence(const PatternCollection& pi1, const PatternCollection& pi2, int N,
                                           int oracle_n = 0, unsigned threads = 0);

enum class Basis { OverlapCriterion, MonotoneCriterion, IsomorphicGraphs, FiniteOrder, Distinct };

struct Verdict {
  Basis basis = Basis::Distinct;
  SeriesComparison series;
  std::optional<PatternBijection> bijection;
  std::string text() const;
};

Verdict decide_equivalence(const PatternCollection& pi1, const PatternCollection& pi2, int N, unsigned threads = 0);

bool separation_property(const Permutation& alpha, const Permutation& beta);
// Members of S_{k+l+k'} starting in the order of alpha on {1..k}, ending in the
// order of beta on {k+1..k+k'}, with the l largest values in between.
std::vector<Permutation> separated_set(const Permutation& alpha, const Permutation& beta, int l);

// Least member of the orbit under reverse and complement.
Permutation orbit_representative(const Permutation& p);
std::vector<Permutation> orbit(const Permutation& p);

struct OrbitInfo {
  Permutation representative{1};
  int size = 0;
  std::vector<int> self_overlaps;  // nontrivial, i.e. k >= 2
};

struct PairResult {
  Permutation a{1};
  Permutation b{1};
  bool equivalent = false;
  // Smallest q, then n, with cl_{n,q}(a) != cl_{n,q}(b).
  std::optional<std::tuple<int, int, mpz_class, mpz_class>> separating;
};

struct S5Report {
  std::vector<OrbitInfo> orbits;
  std::vector<std::pair<std::string, std::vector<Permutation>>> buckets;  // key "none", "2", "3", "2,3,4", ...
  std::vector<std::vector<Permutation>> classes;  // by bucket order, then representative
  std::vector<PairResult> pairs;                  // every pair inside each bucket
  std::vector<std::pair<Permutation, Permutation>> undecided;
};

S5Report classify_s5(unsigned threads = 0);
std::string s5_report_to_json(const S5Report& report);
std::string s5_report_to_text(const S5Report& report);

// First n with cl_{n,q}(a) != cl_{n,q}(b) for n <= max_n.
std::optional<int> separating_length(const PatternCollection& a, const PatternCollection& b, int q, int max_n);

}  // namespace cpa
