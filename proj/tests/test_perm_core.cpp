#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cpa/permutation.hpp"

using namespace cpa;

TEST_CASE("standardize ranks arbitrary distinct words") {
  CHECK(standardize(Word({5, 7, 3})) == Permutation{2, 3, 1});
  CHECK(standardize(Word({1, 2, 3})) == Permutation{1, 2, 3});
  CHECK(standardize(Word({9, 4, 1})) == Permutation{3, 2, 1});
  CHECK(standardize(Word({100})) == Permutation{1});
}

TEST_CASE("invalid words and permutations are rejected") {
  CHECK_THROWS_AS(Word({3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Word({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Word(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({2, 2}), std::invalid_argument);
  const std::vector<int> repeated{4, 1, 4};
  CHECK_THROWS_AS(standardize(std::span<const int>(repeated)), std::invalid_argument);
}

TEST_CASE("standardize is idempotent and commutes with the symmetries") {
  const std::vector<std::vector<int>> words{{5, 7, 3}, {10, 2, 8, 4}, {6, 1, 9, 3, 12}, {2}};
  for (const auto& w : words) {
    const Permutation s = standardize(Word(w));
    CHECK(standardize(s.entries()) == s);
    std::vector<int> rev(w.rbegin(), w.rend());
    CHECK(standardize(Word(rev)) == reverse(s));
    // Complement inside the word: mirror each value across the word's range.
    const int hi = *std::max_element(w.begin(), w.end());
    const int lo = *std::min_element(w.begin(), w.end());
    std::vector<int> comp;
    for (int x : w) comp.push_back(hi + lo - x);
    CHECK(standardize(Word(comp)) == complement(s));
  }
}

TEST_CASE("occurrences and divisibility") {
  CHECK(occurrences(Permutation{1, 2, 3}, Permutation{1, 2, 3, 4}) == std::vector<int>{1, 2});
  CHECK(occurrences(Permutation{1, 2, 3}, Permutation{3, 2, 1}).empty());
  CHECK(occurrences(Permutation{2, 3, 1}, Permutation{2, 3, 1, 4}) == std::vector<int>{1});
  CHECK(occurrences(Permutation{1, 2, 3, 4}, Permutation{1, 2}).empty());
  CHECK(divides(Permutation{1}, Permutation{3, 1, 2}));
  CHECK(left_divides(Permutation{1, 2}, Permutation{1, 3, 2}));
  CHECK_FALSE(right_divides(Permutation{1, 2}, Permutation{1, 3, 2}));
  CHECK(right_divides(Permutation{2, 1}, Permutation{1, 3, 2}));
}

TEST_CASE("reverse and complement generate a Klein four-group") {
  CHECK(reverse(Permutation{1, 2, 3, 4, 5}) == Permutation{5, 4, 3, 2, 1});
  CHECK(complement(Permutation{1, 4, 3, 2, 5}) == Permutation{5, 2, 3, 4, 1});
  for (int n = 1; n <= 5; ++n) {
    for_each_permutation(n, [](const Permutation& p) {
      CHECK(reverse(reverse(p)) == p);
      CHECK(complement(complement(p)) == p);
      CHECK(reverse(complement(p)) == complement(reverse(p)));
      CHECK(inverse(inverse(p)) == p);
    });
  }
  const Permutation id = Permutation::identity(5);
  std::set<Permutation> orbit{id, reverse(id), complement(id), reverse(complement(id))};
  CHECK(orbit.size() == 2);
}

TEST_CASE("each window has exactly one standardization") {
  for (int n = 1; n <= 6; ++n) {
    for (int l = 1; l <= n; ++l) {
      const auto patterns = all_permutations(l);
      for_each_permutation(n, [&](const Permutation& host) {
        int total = 0;
        for (const auto& p : patterns) {
          const auto occ = occurrences(p, host);
          CHECK(std::is_sorted(occ.begin(), occ.end()));
          if (!occ.empty()) {
            CHECK(occ.front() >= 1);
            CHECK(occ.back() <= n - l + 1);
          }
          total += static_cast<int>(occ.size());
        }
        CHECK(total == n - l + 1);
      });
    }
  }
}

TEST_CASE("text forms parse and print") {
  CHECK(parse_permutation("1342765") == Permutation{1, 3, 4, 2, 7, 6, 5});
  CHECK(parse_permutation("1 3 2") == Permutation{1, 3, 2});
  CHECK(parse_permutation(" 2, 1 ,3 ") == Permutation{2, 1, 3});
  CHECK(parse_permutation("1") == Permutation{1});
  CHECK(parse_permutation("10 1 2 3 4 5 6 7 8 9").size() == 10);
  CHECK_THROWS_AS(parse_permutation(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation("1 x 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation("120"), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation("1 1"), std::invalid_argument);
  const Permutation p{4, 1, 3, 2};
  CHECK(to_string(p) == "4 1 3 2");
  CHECK(parse_permutation(to_string(p)) == p);
  CHECK(to_compact_string(p) == "4132");
  std::ostringstream os;
  os << p;
  CHECK(os.str() == "(4 1 3 2)");
}

TEST_CASE("shortlex order and enumeration") {
  CHECK(Permutation{2, 1} < Permutation{1, 2, 3});
  CHECK(Permutation{1, 3, 2} < Permutation{2, 1, 3});
  const auto s4 = all_permutations(4);
  CHECK(s4.size() == 24);
  CHECK(std::is_sorted(s4.begin(), s4.end()));
  CHECK(prefix_pattern(Permutation{1, 5, 2, 3, 6, 4}, 3) == Permutation{1, 3, 2});
  CHECK(suffix_pattern(Permutation{1, 5, 2, 3, 6, 4}, 3) == Permutation{1, 3, 2});
  CHECK_THROWS_AS(Permutation({1, 2}).window(2, 2), std::out_of_range);
}
