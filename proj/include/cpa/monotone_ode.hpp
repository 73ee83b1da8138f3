#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cpa/cluster_engine.hpp"
#include "cpa/gf_series.hpp"
#include "cpa/overlap_graph.hpp"

namespace cpa {

// An overlap of `left` followed by `right` at length k whose prefix of
// `right` holds the entry `entry` > k.
struct MonotoneWitness {
  Permutation left;
  Permutation right;
  int k = 0;
  int entry = 0;
};

class NotMonotoneError : public std::invalid_argument {
public:
  explicit NotMonotoneError(MonotoneWitness w);
  const MonotoneWitness& witness() const noexcept { return witness_; }

private:
  MonotoneWitness witness_;
};

struct MonotoneCheck {
  bool monotone = true;
  std::optional<MonotoneWitness> witness;  // the first violation in pair order
};

MonotoneCheck check_monotone(const PatternCollection& collection);
inline bool is_monotone(const PatternCollection& collection) { return check_monotone(collection).monotone; }

// Edge v -> v' of a monotone graph reduced to the numbers the recurrence uses:
// cl_{v,n,q} += C(n - m, l - m) cl_{v', n - l + k', q - 1}.
struct MonotoneEdge {
  int source = 0;
  int target = 0;
  int length = 0;    // l
  int k_target = 0;  // k' = |v'|
  int m = 0;         // max entry of the end word, or l when l <= k + k'
};

std::vector<MonotoneEdge> monotone_recurrence_data(const OverlapGraph& graph);

// Totals only.  The explicit form takes hand-written edge data over the given
// vertices; vertex 0 must be (1).
ClusterTable monotone_cluster_counts(const PatternCollection& collection, int max_n, int max_q);
ClusterTable monotone_cluster_counts(std::vector<Permutation> vertices, std::span<const MonotoneEdge> edges, int max_n,
                                     int max_q);

// y -> d^outer/dx^outer ( x^degree / degree! * d^inner/dx^inner y_target ).
struct OdeTerm {
  int outer = 0;
  int degree = 0;
  int inner = 0;
  int target = 0;

  friend bool operator==(const OdeTerm&, const OdeTerm&) = default;
};

// d^order/dx^order y_vertex = t * sum(terms).  initial[n][q] = cl_{v,n,q} for
// n < order, which fixes the solution.
struct OdeEquation {
  int vertex = 0;
  int order = 0;
  std::vector<OdeTerm> terms;
  std::vector<std::vector<mpz_class>> initial;
};

struct OdeSystem {
  std::vector<Permutation> vertices;
  std::vector<OdeEquation> equations;
};

OdeSystem emit_ode_system(const PatternCollection& collection);
OdeSystem emit_ode_system(std::vector<Permutation> vertices, std::span<const MonotoneEdge> edges);
// One equation in y = y_(1) alone.
OdeSystem emit_single_pattern_ode(const Permutation& pattern);

struct CoefficientMismatch {
  int n = 0;  // x^n coefficient
  int q = 0;  // t^q coefficient
  mpq_class lhs;
  mpq_class rhs;
};

struct EquationCheck {
  int vertex = 0;
  bool ok = true;
  bool boundary_ok = true;
  int checked_through = 0;  // highest power of x compared
  std::optional<CoefficientMismatch> mismatch;
};

struct OdeReport {
  bool ok = true;
  std::vector<EquationCheck> equations;
};

// series[v] must have order N >= max order + max degree.
OdeReport verify_ode(const OdeSystem& system, std::span<const BiSeries> series, int N);
// The series y_v of every vertex, through x^N.
std::vector<BiSeries> vertex_series_all(const ClusterTable& table, int N);

// coef * t^t_power * x^x_power * d^outer/dx^outer ( x^degree/degree! * y^(inner) ).
struct ScalarOdeTerm {
  mpq_class coef;
  int t_power = 0;
  int x_power = 0;
  int outer = 0;
  int degree = 0;
  int inner = 0;
};

struct ScalarOde {
  std::string name;
  std::vector<Permutation> collection;
  std::vector<ScalarOdeTerm> terms;  // sum(terms) = 0
};

// Hand-eliminated single equations for two monotone collections, as
// stated, plus the corrected elimination for {12354, 132465}.
std::vector<ScalarOde> golden_scalar_odes();

struct ScalarOdeCheck {
  bool ok = true;
  int checked_through = 0;
  std::optional<CoefficientMismatch> mismatch;  // lhs = residual, rhs = 0
};

ScalarOdeCheck verify_scalar_ode(std::span<const ScalarOdeTerm> terms, const BiSeries& y);

std::string ode_to_json(const OdeSystem& system);
std::string ode_to_text(const OdeSystem& system);
std::string scalar_ode_to_text(const ScalarOde& ode);
std::string report_to_text(const OdeSystem& system, const OdeReport& report);

}  // namespace cpa
