#include "cpa/combinatorics.hpp"

#include <stdexcept>

namespace cpa {

mpz_class binomial(long N, long M) {
  if (N < 0 || M < 0 || M > N) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(M));
  return r;
}

mpz_class factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

SubsetIndexer::SubsetIndexer(int max_n) : max_n_(max_n) {
  if (max_n < 0 || max_n > 60) throw std::invalid_argument("SubsetIndexer: max_n out of range");
  const auto w = static_cast<std::size_t>(max_n + 1);
  table_.assign(w * w, 0);
  for (std::size_t n = 0; n < w; ++n) {
    table_[n * w] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      table_[n * w + k] = table_[(n - 1) * w + k - 1] + (k <= n - 1 ? table_[(n - 1) * w + k] : 0);
    }
  }
}

}  // namespace cpa
