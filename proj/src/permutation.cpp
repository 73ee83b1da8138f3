#include "cpa/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cpa {

namespace {

void check_distinct_positive(std::span<const int> values, const char* what) {
  std::vector<int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 1) {
    throw std::invalid_argument(std::string(what) + ": entries must be positive");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument(std::string(what) + ": repeated entry");
  }
}

}  // namespace

Word::Word(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("word: empty");
  check_distinct_positive(entries_, "word");
}

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
  const int n = size();
  if (n == 0) throw std::invalid_argument("permutation: length 0");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int e : entries_) {
    if (e < 1 || e > n || seen[static_cast<std::size_t>(e)]) {
      throw std::invalid_argument("permutation: entries must be exactly 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(e)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> e(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(e.begin(), e.end(), 1);
  return Permutation(std::move(e));
}

std::span<const int> Permutation::window(int first, int length) const {
  if (first < 1 || length < 0 || first + length - 1 > size()) {
    throw std::out_of_range("permutation window out of range");
  }
  return std::span<const int>(entries_).subspan(static_cast<std::size_t>(first - 1),
                                                static_cast<std::size_t>(length));
}

std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                b.entries_.begin(), b.entries_.end());
}

Permutation standardize(std::span<const int> values) {
  if (values.empty()) throw std::invalid_argument("standardize: empty sequence");
  check_distinct_positive(values, "standardize");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return values[i] < values[j]; });
  std::vector<int> out(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
  return Permutation(std::move(out));
}

Permutation standardize(const Word& w) { return standardize(w.entries()); }

bool same_relative_order(std::span<const int> a, std::span<const int> b) noexcept {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((a[i] < a[j]) != (b[i] < b[j])) return false;
    }
  }
  return true;
}

int count_occurrences(const Permutation& pattern, std::span<const int> host) noexcept {
  const auto l = static_cast<std::size_t>(pattern.size());
  if (l > host.size()) return 0;
  int count = 0;
  for (std::size_t i = 0; i + l <= host.size(); ++i) {
    if (same_relative_order(pattern.entries(), host.subspan(i, l))) ++count;
  }
  return count;
}

std::vector<int> occurrences(const Permutation& pattern, const Permutation& host) {
  std::vector<int> out;
  const int l = pattern.size();
  const int n = host.size();
  for (int i = 1; i + l - 1 <= n; ++i) {
    if (same_relative_order(pattern.entries(), host.window(i, l))) out.push_back(i);
  }
  return out;
}

bool divides(const Permutation& pattern, const Permutation& host) {
  return count_occurrences(pattern, host.entries()) > 0;
}

bool left_divides(const Permutation& pattern, const Permutation& host) {
  return pattern.size() <= host.size() &&
         same_relative_order(pattern.entries(), host.window(1, pattern.size()));
}

bool right_divides(const Permutation& pattern, const Permutation& host) {
  const int l = pattern.size();
  return l <= host.size() &&
         same_relative_order(pattern.entries(), host.window(host.size() - l + 1, l));
}

Permutation reverse(const Permutation& p) {
  std::vector<int> e(p.entries().rbegin(), p.entries().rend());
  return Permutation(std::move(e));
}

Permutation complement(const Permutation& p) {
  const int n = p.size();
  std::vector<int> e;
  e.reserve(static_cast<std::size_t>(n));
  for (int x : p.entries()) e.push_back(n + 1 - x);
  return Permutation(std::move(e));
}

Permutation inverse(const Permutation& p) {
  std::vector<int> e(static_cast<std::size_t>(p.size()));
  for (int i = 1; i <= p.size(); ++i) e[static_cast<std::size_t>(p(i) - 1)] = i;
  return Permutation(std::move(e));
}

Permutation prefix_pattern(const Permutation& p, int k) { return standardize(p.window(1, k)); }

Permutation suffix_pattern(const Permutation& p, int k) {
  return standardize(p.window(p.size() - k + 1, k));
}

Permutation parse_permutation(std::string_view text) {
  auto is_sep = [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); };
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    if (j > i) tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  if (tokens.empty()) throw std::invalid_argument("permutation text is empty");

  std::vector<int> entries;
  auto parse_int = [&](std::string_view tok) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("malformed permutation entry '" + std::string(tok) + "'");
    }
    entries.push_back(v);
  };
  if (tokens.size() == 1 && tokens[0].size() > 1) {
    // Compact digit string.
    for (char c : tokens[0]) {
      if (c < '1' || c > '9') {
        throw std::invalid_argument("malformed compact permutation '" + std::string(tokens[0]) + "'");
      }
      entries.push_back(c - '0');
    }
  } else {
    for (auto tok : tokens) parse_int(tok);
  }
  return Permutation(std::move(entries));
}

std::string to_string(const Permutation& p) {
  std::string out;
  for (int i = 1; i <= p.size(); ++i) {
    if (i > 1) out += ' ';
    out += std::to_string(p(i));
  }
  return out;
}

std::string to_compact_string(const Permutation& p) {
  if (p.size() > 9) return to_string(p);
  std::string out;
  for (int x : p.entries()) out += static_cast<char>('0' + x);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  return os << '(' << to_string(p) << ')';
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn) {
  std::vector<int> e(static_cast<std::size_t>(n));
  std::iota(e.begin(), e.end(), 1);
  do {
    fn(Permutation(e));
  } while (std::next_permutation(e.begin(), e.end()));
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  for_each_permutation(n, [&](const Permutation& p) { out.push_back(p); });
  return out;
}

}  // namespace cpa

std::size_t std::hash<cpa::Permutation>::operator()(const cpa::Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : p.entries()) {
    h ^= static_cast<std::size_t>(x);
    h *= 1099511628211ull;
  }
  return h;
}
