#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "cpa/cluster_engine.hpp"

using namespace cpa;

namespace {

PatternCollection coll(std::initializer_list<const char*> pats) {
  std::vector<Permutation> v;
  for (const char* s : pats) v.push_back(parse_permutation(s));
  return PatternCollection(std::move(v));
}

void check_engine_matches_oracle(const PatternCollection& c, int max_n, int max_q) {
  const CountGrid oracle = count_clusters_oracle(c, max_n, max_q);
  const CountGrid engine = table_totals(cluster_counts(c, max_n, max_q));
  CHECK(engine == oracle);
}

}  // namespace

TEST_CASE("oracle lists the defining small clusters") {
  const PatternCollection c{Permutation{1, 2, 3}};
  auto one = enumerate_clusters_oracle(c, 3, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].sigma == Permutation{1, 2, 3});
  CHECK(one[0].offsets == std::vector<int>{1});
  auto four = enumerate_clusters_oracle(c, 4, 2);
  REQUIRE(four.size() == 1);
  CHECK(four[0].sigma == Permutation{1, 2, 3, 4});
  CHECK(four[0].offsets == std::vector<int>{1, 2});
  auto five = enumerate_clusters_oracle(c, 5, 2);
  REQUIRE(five.size() == 1);
  CHECK(five[0].sigma == Permutation{1, 2, 3, 4, 5});
  CHECK(five[0].offsets == std::vector<int>{1, 3});
  CHECK(enumerate_clusters_oracle(c, 5, 3).size() == 1);
  CHECK(enumerate_clusters_oracle(c, 2, 1).empty());
}

TEST_CASE("listed clusters satisfy the definition and match the counts") {
  const PatternCollection c = coll({"1432", "213"});
  const CountGrid grid = count_clusters_oracle(c, 8, 4);
  for (int n = 1; n <= 8; ++n) {
    for (int q = 1; q <= 4; ++q) {
      const auto list = enumerate_clusters_oracle(c, n, q);
      CHECK(mpz_class(static_cast<unsigned long>(list.size())) == grid(n, q));
      for (const auto& cl : list) {
        REQUIRE(static_cast<int>(cl.offsets.size()) == q);
        CHECK(cl.offsets.front() == 1);
        CHECK(cl.offsets.back() + cl.patterns.back().size() - 1 == n);
        for (int j = 0; j < q; ++j) {
          const auto& p = cl.patterns[static_cast<std::size_t>(j)];
          CHECK(standardize(cl.sigma.window(cl.offsets[static_cast<std::size_t>(j)], p.size())) == p);
          if (j + 1 < q) {
            CHECK(cl.offsets[static_cast<std::size_t>(j + 1)] > cl.offsets[static_cast<std::size_t>(j)]);
            CHECK(cl.offsets[static_cast<std::size_t>(j + 1)] < cl.offsets[static_cast<std::size_t>(j)] + p.size());
          }
        }
      }
    }
  }
}

TEST_CASE("base cases of the recurrence") {
  for (const auto& c : {coll({"123"}), coll({"2413", "132"}), coll({"1"}), coll({"12"})}) {
    const CountGrid t = table_totals(cluster_counts(c, 8, 4));
    CHECK(t(1, 0) == 1);
    for (int n = 2; n <= 8; ++n) CHECK(t(n, 0) == 0);
  }
  for (int l = 1; l <= 5; ++l) {
    for_each_permutation(l, [&](const Permutation& p) {
      CHECK(table_totals(cluster_counts(PatternCollection{p}, l, 1))(l, 1) == 1);
    });
  }
  const CountGrid inc = table_totals(cluster_counts(coll({"123"}), 6, 3));
  CHECK(inc(4, 2) == 1);
  CHECK(inc(5, 2) == 1);
  const CountGrid single = table_totals(cluster_counts(coll({"1"}), 6, 6));
  CHECK(single(1, 1) == 1);
  for (int n = 2; n <= 6; ++n) {
    for (int q = 1; q <= 6; ++q) CHECK(single(n, q) == 0);
  }
}

TEST_CASE("recurrence matches the oracle for the increasing pattern") {
  check_engine_matches_oracle(coll({"123"}), 10, 6);
}

TEST_CASE("recurrence matches the oracle for all single patterns up to length 4") {
  for (int l = 1; l <= 4; ++l) {
    for_each_permutation(l, [](const Permutation& p) { check_engine_matches_oracle(PatternCollection{p}, 9, 5); });
  }
}

TEST_CASE("recurrence matches the oracle for multi-pattern collections") {
  for (const auto& c : {coll({"132", "213"}), coll({"1432", "213"}), coll({"12354", "132465"}),
                        coll({"1576243", "13254"}), coll({"1342765", "152364"}), coll({"2413", "3142", "123"}), coll({"2143", "3412"}),
                        coll({"21", "123"})}) {
    check_engine_matches_oracle(c, 10, 5);
  }
}

TEST_CASE("refined counts agree with clusters grouped by initial word") {
  for (const auto& c : {coll({"13254"}), coll({"12354", "132465"}), coll({"1432", "213"}), coll({"2413", "3142"})}) {
    const OverlapGraph g(c);
    const ClusterTable table = cluster_counts(g, 9, 4);
    for (int n = 1; n <= 9; ++n) {
      for (int q = 1; q <= 4; ++q) {
        std::map<std::pair<int, std::vector<int>>, long> expected;
        for (const auto& cl : enumerate_clusters_oracle(c, n, q)) {
          const Permutation& first = cl.patterns.front();
          for (int v = 0; v < g.vertex_count(); ++v) {
            const int k = g.vertex(v).size();
            if (k > first.size() || prefix_pattern(first, k) != g.vertex(v)) continue;
            const auto w = cl.sigma.window(1, k);
            ++expected[{v, std::vector<int>(w.begin(), w.end())}];
          }
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
          mpz_class sum = 0;
          for (const auto& x : table.refined_row(v, n, q)) sum += x;
          CHECK(sum == table.total(v, n, q));
          long expected_total = 0;
          for (const auto& [key, cnt] : expected) {
            if (key.first != v) continue;
            expected_total += cnt;
            CHECK(table.refined(v, n, q, key.second) == cnt);
          }
          CHECK(table.total(v, n, q) == expected_total);
        }
      }
    }
  }
}

TEST_CASE("single-pattern recurrence agrees with the graph recurrence") {
  const auto compare = [](const Permutation& p, int max_n, int max_q) {
    const ClusterTable a = cluster_counts_single_pattern(p, max_n, max_q);
    const ClusterTable b = cluster_counts(PatternCollection{p}, max_n, max_q);
    REQUIRE(a.vertex_count() == b.vertex_count());
    for (int v = 0; v < a.vertex_count(); ++v) {
      CHECK(a.vertices()[static_cast<std::size_t>(v)] == b.vertices()[static_cast<std::size_t>(v)]);
      for (int n = 0; n <= max_n; ++n) {
        for (int q = 0; q <= max_q; ++q) {
          CHECK(a.total(v, n, q) == b.total(v, n, q));
          const auto ra = a.refined_row(v, n, q);
          const auto rb = b.refined_row(v, n, q);
          CHECK(std::vector<mpz_class>(ra.begin(), ra.end()) == std::vector<mpz_class>(rb.begin(), rb.end()));
        }
      }
    }
  };
  compare(Permutation{1, 2, 3}, 12, 8);
  compare(parse_permutation("132679485"), 20, 3);
  compare(parse_permutation("13254"), 14, 5);
  compare(parse_permutation("1"), 5, 5);
  for (int l = 2; l <= 5; ++l) {
    for_each_permutation(l, [&](const Permutation& p) { compare(p, 11, 4); });
  }
}

TEST_CASE("a pattern without self-overlap only links at one entry") {
  const CountGrid t = table_totals(cluster_counts_single_pattern(Permutation{1, 3, 2}, 12, 5));
  const CountGrid oracle = count_clusters_oracle(PatternCollection{Permutation{1, 3, 2}}, 9, 4);
  for (int n = 1; n <= 12; ++n) {
    for (int q = 1; q <= 5; ++q) {
      if (n != 2 * q + 1) CHECK(t(n, q) == 0);
      if (n <= 9 && q <= 4) CHECK(t(n, q) == oracle(n, q));
    }
  }
}

TEST_CASE("cluster lengths of a pattern overlapping itself in one and three entries") {
  const CountGrid t = table_totals(cluster_counts_single_pattern(parse_permutation("132679485"), 20, 3));
  CHECK(t(9, 1) == 1);
  for (int n = 10; n <= 20; ++n) {
    if (n != 15 && n != 17) CHECK(t(n, 2) == 0);
  }
  CHECK(t(15, 2) > 0);
  CHECK(t(17, 2) > 0);
}

TEST_CASE("cluster counts are invariant under reverse and complement") {
  for (int l = 2; l <= 4; ++l) {
    for_each_permutation(l, [](const Permutation& p) {
      const PatternCollection c{p};
      const CountGrid t = table_totals(cluster_counts(c, 10, 5));
      CHECK(t == table_totals(cluster_counts(c.reversed(), 10, 5)));
      CHECK(t == table_totals(cluster_counts(c.complemented(), 10, 5)));
    });
  }
  const PatternCollection c = coll({"1432", "213"});
  CHECK(count_clusters_oracle(c, 9, 4) == count_clusters_oracle(c.reversed(), 9, 4));
  CHECK(count_clusters_oracle(c, 9, 4) == count_clusters_oracle(c.complemented(), 9, 4));
}

TEST_CASE("support bounds") {
  for (const auto& c : {coll({"1243"}), coll({"12354", "132465"}), coll({"1234"})}) {
    const OverlapGraph g(c);
    int kmax = 1;
    for (const auto& v : g.vertices()) kmax = std::max(kmax, v.size());
    const int lmax = c.max_length();
    const CountGrid t = table_totals(cluster_counts(c, 16, 6));
    for (int n = 1; n <= 16; ++n) {
      for (int q = 1; q <= 6; ++q) {
        if (t(n, q) == 0) continue;
        CHECK(t(n, q) > 0);
        CHECK(n >= q);
        CHECK(n <= lmax + (q - 1) * (lmax - 1));
        CHECK(n >= c.min_length() + (q - 1) * (c.min_length() - kmax));
      }
    }
  }
}

TEST_CASE("totals-only mode and threading give the same totals") {
  const PatternCollection c = coll({"12354", "132465"});
  const CountGrid a = table_totals(cluster_counts(c, 15, 5, {1, true}));
  const CountGrid b = table_totals(cluster_counts(c, 15, 5, {4, false}));
  CHECK(a == b);
  CHECK_THROWS_AS(cluster_counts(c, 15, 5, {1, false}).refined_row(0, 5, 1), std::logic_error);
}

TEST_CASE("linkage profile orders the boundary entries") {
  const PatternCollection c = coll({"1576243"});
  const OverlapGraph g(c);
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const LinkageProfile p = linkage_profile(g, e);
    CHECK(std::is_sorted(p.sorted_values.begin(), p.sorted_values.end()));
    if (p.disjoint) {
      CHECK(static_cast<int>(p.psi_bar.size()) == p.k + p.k_target);
      for (int pos : p.psi_bar) CHECK((pos <= p.k || pos > p.length - p.k_target));
    }
  }
}

TEST_CASE("totals TSV round trip") {
  const CountGrid t = table_totals(cluster_counts(coll({"123"}), 8, 4));
  const std::string tsv = totals_to_tsv(t);
  CHECK(tsv.rfind("n\tq\tcl\n", 0) == 0);
  CHECK(parse_totals_tsv(tsv) == t);
  CHECK_THROWS_AS(parse_totals_tsv("bad"), std::invalid_argument);
}
