#pragma once

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cpa/cluster_engine.hpp"
#include "cpa/overlap_graph.hpp"

namespace cpa {

// Truncated bivariate series sum c_{n,q} x^n t^q with exact rational
// coefficients, known for n <= order.  Each x^n slice is a dense polynomial
// in t.
class BiSeries {
public:
  explicit BiSeries(int order);
  static BiSeries one(int order);

  int order() const noexcept { return order_; }
  mpq_class coeff(int n, int q) const;
  void set(int n, int q, const mpq_class& value);
  void add(int n, int q, const mpq_class& value);
  // Coefficients of t^0, t^1, ... in the x^n slice (no trailing zeros).
  std::span<const mpq_class> slice(int n) const;
  int t_degree() const;

  // n! * c_{n,q}; throws std::domain_error if not an integer.
  mpz_class count(int n, int q) const;

  BiSeries truncated(int order) const;
  BiSeries derivative(int times = 1) const;
  // Multiplies by x^b / b!.
  BiSeries times_monomial(int b) const;
  // Multiplies by x^p.
  BiSeries times_x_power(int p) const;
  BiSeries times_t_power(int e) const;
  // Substitutes a value for t; the result only has t^0 terms.
  BiSeries evaluate_t(const mpq_class& t) const;

  BiSeries& operator+=(const BiSeries& o);
  BiSeries& operator-=(const BiSeries& o);
  BiSeries& operator*=(const mpq_class& c);
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(BiSeries a, const mpq_class& c) { return a *= c; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  BiSeries operator-() const;

  bool is_zero() const;
  friend bool operator==(const BiSeries& a, const BiSeries& b);

private:
  void trim(int n);
  int order_;
  std::vector<std::vector<mpq_class>> slices_;
};

// P(x, t) -> P(x, t + delta).
BiSeries shift_t(const BiSeries& s, long delta);
// 1/s; the x^0 slice of s must be exactly 1.
BiSeries reciprocal(const BiSeries& s);

// sum cl_{n,q} x^n t^q / n!, which starts with x from the 0-cluster.
BiSeries cluster_gf(const CountGrid& totals, int order);
// The same for the clusters of one vertex of a table.
BiSeries vertex_series(const ClusterTable& table, int vertex, int order);
// 1 / (1 - cluster_gf(x, t - 1)).
BiSeries avoidance_gf_from_clusters(const BiSeries& cluster_series);
BiSeries avoidance_gf(const PatternCollection& collection, int order, unsigned threads = 0);

// result[q] = number of permutations of length n with exactly q consecutive
// occurrences of patterns from the list, by scanning all of S_n.  The list
// need not be reduced.
std::vector<mpz_class> count_distribution_oracle(std::span<const Permutation> patterns, int n, unsigned threads = 0);
std::vector<mpz_class> count_distribution_oracle(const PatternCollection& collection, int n, unsigned threads = 0);

// TSV: "n q alpha" for every n <= order and q <= n; and "n alpha" for t = 0.
std::string alpha_table_to_tsv(const BiSeries& avoidance);
std::string alpha_n_to_tsv(const BiSeries& avoidance);
// Parses the first format back into the series it came from.
BiSeries parse_alpha_table_tsv(const std::string& text);

}  // namespace cpa
