#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace cpa {

// C(N, M) with the convention C(N, M) = 0 when N < 0, M < 0 or M > N.
mpz_class binomial(long N, long M);
mpz_class factorial(long n);
// num / den in lowest terms.
inline mpq_class ratio(const mpz_class& num, const mpz_class& den) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

// Colex ranking of k-subsets of {1..n}.  A k-subset {c_1 < ... < c_k} has rank
// sum_i C(c_i - 1, i), so the subsets of {1..n} are ranked 0..C(n,k)-1 and
// the rank does not depend on n.
class SubsetIndexer {
public:
  explicit SubsetIndexer(int max_n);

  int max_n() const noexcept { return max_n_; }
  std::uint64_t choose(int n, int k) const noexcept {
    if (n < 0 || k < 0 || k > n) return 0;
    return table_[static_cast<std::size_t>(n) * (max_n_ + 1) + static_cast<std::size_t>(k)];
  }
  // `sorted` must be strictly increasing, entries in 1..max_n.
  std::uint64_t rank(std::span<const int> sorted) const noexcept {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) r += choose(sorted[i] - 1, static_cast<int>(i) + 1);
    return r;
  }

private:
  int max_n_;
  std::vector<std::uint64_t> table_;
};

// Advances `c` (strictly increasing, values in 1..n) to the next k-subset in
// lexicographic order; returns false after the last one.
inline bool next_subset(std::span<int> c, int n) noexcept {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace cpa
