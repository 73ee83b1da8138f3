#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cpa {

// A sequence of pairwise-distinct positive integers, not necessarily 1..n.
class Word {
public:
  explicit Word(std::vector<int> entries);
  Word(std::initializer_list<int> entries) : Word(std::vector<int>(entries)) {}

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  // 1-based access.
  int operator()(int i) const { return entries_.at(static_cast<std::size_t>(i - 1)); }
  std::span<const int> entries() const noexcept { return entries_; }

private:
  std::vector<int> entries_;
};

// A sequence containing each of 1..n exactly once, n >= 1.  Positions are
// 1-based throughout the public interface.
class Permutation {
public:
  explicit Permutation(std::vector<int> entries);
  Permutation(std::initializer_list<int> entries) : Permutation(std::vector<int>(entries)) {}

  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  int operator()(int i) const { return entries_.at(static_cast<std::size_t>(i - 1)); }
  std::span<const int> entries() const noexcept { return entries_; }

  // Entries at positions first..first+length-1 (unstandardized).
  std::span<const int> window(int first, int length) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  // Shortlex: shorter permutations first, then lexicographic.
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b);

private:
  std::vector<int> entries_;
};

// Unique permutation with the same relative order as `w`.
Permutation standardize(const Word& w);
// Same, for a raw sequence; throws std::invalid_argument on repeated or
// non-positive entries.
Permutation standardize(std::span<const int> values);

// True iff the two equal-length sequences of distinct values are order-isomorphic.
bool same_relative_order(std::span<const int> a, std::span<const int> b) noexcept;

// 1-based starting positions i with st[host(i..i+l-1)] = pattern, increasing.
std::vector<int> occurrences(const Permutation& pattern, const Permutation& host);
int count_occurrences(const Permutation& pattern, std::span<const int> host) noexcept;

bool divides(const Permutation& pattern, const Permutation& host);
bool left_divides(const Permutation& pattern, const Permutation& host);
bool right_divides(const Permutation& pattern, const Permutation& host);

Permutation reverse(const Permutation& p);
Permutation complement(const Permutation& p);
Permutation inverse(const Permutation& p);

// Standardization of the first / last k entries.
Permutation prefix_pattern(const Permutation& p, int k);
Permutation suffix_pattern(const Permutation& p, int k);

// Text form: whitespace- or comma-separated integers, or a compact digit
// string such as "1342765".
Permutation parse_permutation(std::string_view text);
// Separated-integer form, e.g. "1 3 4 2".
std::string to_string(const Permutation& p);
// Digit string when every entry is <= 9, otherwise the separated form.
std::string to_compact_string(const Permutation& p);

std::ostream& operator<<(std::ostream& os, const Permutation& p);

// Calls fn for every permutation of length n in lexicographic order.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn);
std::vector<Permutation> all_permutations(int n);

}  // namespace cpa

template <>
struct std::hash<cpa::Permutation> {
  std::size_t operator()(const cpa::Permutation& p) const noexcept;
};
