#include "cpa/gf_series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cpa/combinatorics.hpp"
#include "prefix_walk.hpp"

namespace cpa {

BiSeries::BiSeries(int order) : order_(order) {
  if (order < 0) throw std::invalid_argument("BiSeries: negative order");
  slices_.resize(static_cast<std::size_t>(order + 1));
}

BiSeries BiSeries::one(int order) {
  BiSeries s(order);
  s.set(0, 0, 1);
  return s;
}

mpq_class BiSeries::coeff(int n, int q) const {
  if (n < 0 || n > order_ || q < 0) return 0;
  const auto& sl = slices_[static_cast<std::size_t>(n)];
  return static_cast<std::size_t>(q) < sl.size() ? sl[static_cast<std::size_t>(q)] : mpq_class(0);
}

void BiSeries::set(int n, int q, const mpq_class& value) {
  if (n < 0 || n > order_ || q < 0) throw std::out_of_range("BiSeries::set: index out of range");
  auto& sl = slices_[static_cast<std::size_t>(n)];
  if (static_cast<std::size_t>(q) >= sl.size()) {
    if (value == 0) return;
    sl.resize(static_cast<std::size_t>(q) + 1);
  }
  sl[static_cast<std::size_t>(q)] = value;
  trim(n);
}

void BiSeries::add(int n, int q, const mpq_class& value) {
  if (n < 0 || n > order_ || q < 0) throw std::out_of_range("BiSeries::add: index out of range");
  if (value == 0) return;
  auto& sl = slices_[static_cast<std::size_t>(n)];
  if (static_cast<std::size_t>(q) >= sl.size()) sl.resize(static_cast<std::size_t>(q) + 1);
  sl[static_cast<std::size_t>(q)] += value;
  trim(n);
}

void BiSeries::trim(int n) {
  auto& sl = slices_[static_cast<std::size_t>(n)];
  while (!sl.empty() && sl.back() == 0) sl.pop_back();
}

std::span<const mpq_class> BiSeries::slice(int n) const {
  if (n < 0 || n > order_) throw std::out_of_range("BiSeries::slice: n out of range");
  return slices_[static_cast<std::size_t>(n)];
}

int BiSeries::t_degree() const {
  int d = -1;
  for (const auto& sl : slices_) d = std::max(d, static_cast<int>(sl.size()) - 1);
  return d;
}

mpz_class BiSeries::count(int n, int q) const {
  const mpq_class v = coeff(n, q) * mpq_class(factorial(n));
  if (v.get_den() != 1) {
    throw std::domain_error("BiSeries::count: n!*c(" + std::to_string(n) + "," + std::to_string(q) +
                            ") = " + v.get_str() + " is not an integer");
  }
  return v.get_num();
}

BiSeries BiSeries::truncated(int order) const {
  if (order > order_) throw std::invalid_argument("BiSeries::truncated: cannot raise the order");
  BiSeries r(order);
  for (int n = 0; n <= order; ++n) r.slices_[static_cast<std::size_t>(n)] = slices_[static_cast<std::size_t>(n)];
  return r;
}

BiSeries BiSeries::derivative(int times) const {
  if (times < 0) throw std::invalid_argument("BiSeries::derivative: negative order");
  if (times == 0) return *this;
  if (times > order_) throw std::invalid_argument("BiSeries::derivative: series order exhausted");
  BiSeries r(order_ - times);
  for (int n = 0; n <= r.order_; ++n) {
    mpz_class falling = 1;
    for (int i = 0; i < times; ++i) falling *= n + times - i;
    auto sl = slices_[static_cast<std::size_t>(n + times)];
    for (auto& c : sl) c *= falling;
    r.slices_[static_cast<std::size_t>(n)] = std::move(sl);
  }
  return r;
}

BiSeries BiSeries::times_x_power(int p) const {
  if (p < 0) throw std::invalid_argument("BiSeries::times_x_power: negative power");
  BiSeries r(order_ + p);
  for (int n = 0; n <= order_; ++n) r.slices_[static_cast<std::size_t>(n + p)] = slices_[static_cast<std::size_t>(n)];
  return r;
}

BiSeries BiSeries::times_monomial(int b) const {
  return times_x_power(b) * mpq_class(1, factorial(b));
}

BiSeries BiSeries::times_t_power(int e) const {
  if (e < 0) throw std::invalid_argument("BiSeries::times_t_power: negative power");
  BiSeries r(order_);
  for (int n = 0; n <= order_; ++n) {
    const auto& sl = slices_[static_cast<std::size_t>(n)];
    if (sl.empty()) continue;
    auto& out = r.slices_[static_cast<std::size_t>(n)];
    out.assign(static_cast<std::size_t>(e), 0);
    out.insert(out.end(), sl.begin(), sl.end());
  }
  return r;
}

BiSeries BiSeries::evaluate_t(const mpq_class& t) const {
  BiSeries r(order_);
  for (int n = 0; n <= order_; ++n) {
    const auto& sl = slices_[static_cast<std::size_t>(n)];
    mpq_class acc = 0;
    for (auto it = sl.rbegin(); it != sl.rend(); ++it) acc = acc * t + *it;
    r.set(n, 0, acc);
  }
  return r;
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
  const int order = std::min(order_, o.order_);
  slices_.resize(static_cast<std::size_t>(order + 1));
  order_ = order;
  for (int n = 0; n <= order; ++n) {
    const auto& src = o.slices_[static_cast<std::size_t>(n)];
    auto& dst = slices_[static_cast<std::size_t>(n)];
    if (dst.size() < src.size()) dst.resize(src.size());
    for (std::size_t q = 0; q < src.size(); ++q) dst[q] += src[q];
    trim(n);
  }
  return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& o) { return *this += -o; }

BiSeries& BiSeries::operator*=(const mpq_class& c) {
  for (int n = 0; n <= order_; ++n) {
    for (auto& x : slices_[static_cast<std::size_t>(n)]) x *= c;
    trim(n);
  }
  return *this;
}

BiSeries BiSeries::operator-() const {
  BiSeries r = *this;
  for (auto& sl : r.slices_) {
    for (auto& x : sl) x = -x;
  }
  return r;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  const int order = std::min(a.order_, b.order_);
  BiSeries r(order);
  for (int i = 0; i <= order; ++i) {
    const auto& ai = a.slices_[static_cast<std::size_t>(i)];
    if (ai.empty()) continue;
    for (int j = 0; i + j <= order; ++j) {
      const auto& bj = b.slices_[static_cast<std::size_t>(j)];
      if (bj.empty()) continue;
      auto& out = r.slices_[static_cast<std::size_t>(i + j)];
      if (out.size() < ai.size() + bj.size() - 1) out.resize(ai.size() + bj.size() - 1);
      for (std::size_t p = 0; p < ai.size(); ++p) {
        if (ai[p] == 0) continue;
        for (std::size_t q = 0; q < bj.size(); ++q) out[p + q] += ai[p] * bj[q];
      }
    }
  }
  for (int n = 0; n <= order; ++n) r.trim(n);
  return r;
}

bool BiSeries::is_zero() const {
  return std::all_of(slices_.begin(), slices_.end(), [](const auto& sl) { return sl.empty(); });
}

bool operator==(const BiSeries& a, const BiSeries& b) { return a.order_ == b.order_ && a.slices_ == b.slices_; }

BiSeries shift_t(const BiSeries& s, long delta) {
  BiSeries r(s.order());
  const mpz_class d = delta;
  for (int n = 0; n <= s.order(); ++n) {
    const auto sl = s.slice(n);
    // sum_j c_j (t + d)^j = sum_j c_j sum_i C(j, i) d^(j-i) t^i
    for (std::size_t j = 0; j < sl.size(); ++j) {
      if (sl[j] == 0) continue;
      mpz_class power = 1;
      for (long i = static_cast<long>(j); i >= 0; --i) {
        r.add(n, static_cast<int>(i), sl[j] * mpq_class(binomial(static_cast<long>(j), i) * power));
        power *= d;
      }
    }
  }
  return r;
}

BiSeries reciprocal(const BiSeries& s) {
  const auto s0 = s.slice(0);
  if (s0.size() != 1 || s0[0] != 1) throw std::invalid_argument("reciprocal: constant term must be exactly 1");
  const int N = s.order();
  BiSeries r = BiSeries::one(N);
  for (int n = 1; n <= N; ++n) {
    // r_n = -sum_{j=1..n} s_j r_{n-j}, each a polynomial in t.
    std::vector<mpq_class> acc;
    for (int j = 1; j <= n; ++j) {
      const auto sj = s.slice(j);
      const auto rj = r.slice(n - j);
      if (sj.empty() || rj.empty()) continue;
      if (acc.size() < sj.size() + rj.size() - 1) acc.resize(sj.size() + rj.size() - 1);
      for (std::size_t p = 0; p < sj.size(); ++p) {
        for (std::size_t q = 0; q < rj.size(); ++q) acc[p + q] -= sj[p] * rj[q];
      }
    }
    for (std::size_t q = 0; q < acc.size(); ++q) r.set(n, static_cast<int>(q), acc[q]);
  }
  return r;
}

BiSeries cluster_gf(const CountGrid& totals, int order) {
  if (order < 1) throw std::invalid_argument("cluster_gf: order must be at least 1");
  if (totals.max_n() < order || totals.max_q() < order) {
    throw std::invalid_argument("cluster_gf: table filled to (" + std::to_string(totals.max_n()) + "," +
                                std::to_string(totals.max_q()) + "), need (" + std::to_string(order) + "," +
                                std::to_string(order) + ")");
  }
  BiSeries s(order);
  for (int n = 1; n <= order; ++n) {
    const mpz_class f = factorial(n);
    for (int q = 0; q <= order; ++q) {
      if (totals(n, q) != 0) s.set(n, q, ratio(totals(n, q), f));
    }
  }
  return s;
}

BiSeries vertex_series(const ClusterTable& table, int vertex, int order) {
  if (table.max_n() < order || table.max_q() < order) {
    throw std::invalid_argument("vertex_series: table not filled to the requested order");
  }
  BiSeries s(order);
  for (int n = 1; n <= order; ++n) {
    const mpz_class f = factorial(n);
    for (int q = 0; q <= order; ++q) {
      const mpz_class& c = table.total(vertex, n, q);
      if (c != 0) s.set(n, q, ratio(c, f));
    }
  }
  return s;
}

BiSeries avoidance_gf_from_clusters(const BiSeries& cluster_series) {
  return reciprocal(BiSeries::one(cluster_series.order()) - shift_t(cluster_series, -1));
}

BiSeries avoidance_gf(const PatternCollection& collection, int order, unsigned threads) {
  const ClusterTable table = cluster_counts(collection, order, order, EngineOptions{threads, false});
  return avoidance_gf_from_clusters(cluster_gf(table_totals(table), order));
}

namespace {

class DistributionVisitor {
public:
  DistributionVisitor(std::span<const Permutation> patterns, int n)
      : patterns_(patterns), n_(n), running_(static_cast<std::size_t>(n + 1), 0),
        dist_(static_cast<std::size_t>(n + 1), 0) {}

  bool enter(const std::vector<int>& w, bool record) {
    const int i = static_cast<int>(w.size());
    const std::span<const int> ws(w);
    int found = 0;
    for (const auto& p : patterns_) {
      const int l = p.size();
      if (l <= i && same_relative_order(p.entries(), ws.subspan(static_cast<std::size_t>(i - l)))) ++found;
    }
    running_[static_cast<std::size_t>(i)] = running_[static_cast<std::size_t>(i - 1)] + found;
    if (record && i == n_) ++dist_[static_cast<std::size_t>(running_[static_cast<std::size_t>(i)])];
    return true;
  }
  void leave(int) {}

  std::span<const std::uint64_t> dist() const { return dist_; }

private:
  std::span<const Permutation> patterns_;
  int n_;
  std::vector<int> running_;
  std::vector<std::uint64_t> dist_;
};

}  // namespace

std::vector<mpz_class> count_distribution_oracle(std::span<const Permutation> patterns, int n, unsigned threads) {
  if (n < 1) throw std::invalid_argument("count_distribution_oracle: n must be positive");
  if (n > 14) throw std::invalid_argument("count_distribution_oracle: n too large for a full scan");
  if (patterns.empty()) throw std::invalid_argument("count_distribution_oracle: no patterns");
  std::vector<mpz_class> result(static_cast<std::size_t>(n + 1));
  detail::parallel_walk(
      n, threads, [&] { return DistributionVisitor(patterns, n); },
      [&](const DistributionVisitor& v) {
        const auto d = v.dist();
        for (std::size_t q = 0; q < d.size(); ++q) {
          if (d[q] != 0) result[q] += mpz_class(static_cast<unsigned long>(d[q]));
        }
      });
  return result;
}

std::vector<mpz_class> count_distribution_oracle(const PatternCollection& collection, int n, unsigned threads) {
  return count_distribution_oracle(collection.patterns(), n, threads);
}

std::string alpha_table_to_tsv(const BiSeries& avoidance) {
  std::ostringstream os;
  os << "n\tq\talpha\n";
  for (int n = 0; n <= avoidance.order(); ++n) {
    for (int q = 0; q <= n; ++q) os << n << '\t' << q << '\t' << avoidance.count(n, q).get_str() << '\n';
  }
  return os.str();
}

std::string alpha_n_to_tsv(const BiSeries& avoidance) {
  std::ostringstream os;
  os << "n\talpha\n";
  for (int n = 0; n <= avoidance.order(); ++n) os << n << '\t' << avoidance.count(n, 0).get_str() << '\n';
  return os.str();
}

BiSeries parse_alpha_table_tsv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "n\tq\talpha") throw std::invalid_argument("alpha TSV: missing header");
  std::vector<std::tuple<int, int, mpz_class>> rows;
  int order = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int n = 0;
    int q = 0;
    std::string value;
    if (!(ls >> n >> q >> value) || n < 0 || q < 0) throw std::invalid_argument("alpha TSV: malformed row '" + line + "'");
    mpz_class v;
    if (v.set_str(value, 10) != 0) throw std::invalid_argument("alpha TSV: malformed count '" + value + "'");
    order = std::max(order, n);
    rows.emplace_back(n, q, v);
  }
  BiSeries s(order);
  for (auto& [n, q, v] : rows) s.set(n, q, ratio(v, factorial(n)));
  return s;
}

}  // namespace cpa
