#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "cpa/monotone_ode.hpp"

using namespace cpa;

namespace {

PatternCollection coll(std::initializer_list<const char*> pats) {
  std::vector<Permutation> v;
  for (const char* s : pats) v.push_back(parse_permutation(s));
  return PatternCollection(std::move(v));
}

struct Data {
  int l;
  int k;
  int kt;
  int m;
  friend bool operator==(const Data&, const Data&) = default;
  friend bool operator<(const Data& a, const Data& b) {
    return std::tie(a.l, a.k, a.kt, a.m) < std::tie(b.l, b.k, b.kt, b.m);
  }
};

std::vector<Data> data_of(const PatternCollection& c) {
  const OverlapGraph g(c);
  std::vector<Data> out;
  for (const auto& e : monotone_recurrence_data(g)) {
    out.push_back(Data{e.length, g.vertex(e.source).size(), e.k_target, e.m});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Data> sorted(std::vector<Data> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void check_verifies(const PatternCollection& c, int N) {
  const OdeSystem sys = emit_ode_system(c);
  const auto series = vertex_series_all(monotone_cluster_counts(c, N, N), N);
  const OdeReport r = verify_ode(sys, series, N);
  CHECK(r.ok);
  for (const auto& eq : r.equations) CHECK(eq.checked_through == N - sys.equations[static_cast<std::size_t>(eq.vertex)].order);
}

const std::vector<const char*> monotone_singles{"123", "132", "1234", "1243", "1342", "1432", "12345",
                                               "12453", "13254", "13452", "132465", "1342765", "132679485"};

}  // namespace

TEST_CASE("monotonicity and its witness") {
  const auto bad = check_monotone(coll({"213"}));
  REQUIRE_FALSE(bad.monotone);
  CHECK(bad.witness->k == 1);
  CHECK(bad.witness->entry == 2);
  CHECK(bad.witness->left == Permutation{2, 1, 3});
  CHECK(is_monotone(coll({"123"})));
  CHECK(is_monotone(coll({"132679485"})));
  CHECK(is_monotone(coll({"1576243", "13254"})));
  CHECK(is_monotone(coll({"12354", "132465"})));
  // 152364 overlaps itself at 3 with the prefix 152.
  const auto w = check_monotone(coll({"1342765", "152364"}));
  REQUIRE_FALSE(w.monotone);
  CHECK(w.witness->right == parse_permutation("152364"));
  CHECK(w.witness->k == 3);
  CHECK(w.witness->entry == 5);
  CHECK_FALSE(is_monotone(coll({"12534", "132465"})));
  CHECK_THROWS_AS(monotone_recurrence_data(OverlapGraph(coll({"213"}))), NotMonotoneError);
}

TEST_CASE("recurrence data of worked examples") {
  CHECK(data_of(coll({"132679485"})) == sorted({{9, 1, 1, 5}, {9, 1, 3, 8}, {9, 3, 1, 5}, {9, 3, 3, 8}}));
  CHECK(data_of(coll({"12354", "132465"})) ==
        sorted({{5, 1, 1, 4}, {6, 1, 1, 5}, {5, 1, 3, 5}, {6, 1, 3, 6}, {6, 3, 1, 5}, {6, 3, 3, 6}}));
  CHECK(data_of(coll({"1576243", "13254"})) ==
        sorted({{7, 1, 1, 3}, {5, 1, 1, 4}, {7, 1, 3, 4}, {5, 3, 1, 4}, {5, 1, 3, 5}, {5, 3, 3, 5}}));
  CHECK(data_of(coll({"1342765"})) == std::vector<Data>{{7, 1, 1, 5}});
}

TEST_CASE("simplified recurrence agrees with the general engine") {
  for (const auto& c : {coll({"132679485"}), coll({"12354", "132465"}), coll({"1576243", "13254"}), coll({"1342765"})}) {
    const ClusterTable mono = monotone_cluster_counts(c, 15, 8);
    const ClusterTable full = cluster_counts(c, 15, 8, EngineOptions{0, false});
    REQUIRE(mono.vertex_count() == full.vertex_count());
    for (int v = 0; v < mono.vertex_count(); ++v) {
      for (int n = 0; n <= 15; ++n) {
        for (int q = 0; q <= 8; ++q) CHECK(mono.total(v, n, q) == full.total(v, n, q));
      }
    }
  }
  for (const char* s : monotone_singles) {
    const PatternCollection c{parse_permutation(s)};
    REQUIRE(is_monotone(c));
    CHECK(table_totals(monotone_cluster_counts(c, 14, 7)) == table_totals(cluster_counts(c, 14, 7)));
  }
  const PatternCollection id3 = coll({"123"});
  CHECK(table_totals(monotone_cluster_counts(id3, 10, 10)) == count_clusters_oracle(id3, 10, 10));
  const ClusterTable base = monotone_cluster_counts(id3, 5, 3);
  CHECK(base.total(0, 1, 0) == 1);
  for (int n = 2; n <= 5; ++n) CHECK(base.total(0, n, 0) == 0);
  CHECK(table_totals(monotone_cluster_counts(coll({"1"}), 6, 6)) == count_clusters_oracle(coll({"1"}), 6, 6));
}

TEST_CASE("refined counts collapse onto the vertex word") {
  for (const auto& c : {coll({"132679485"}), coll({"12354", "132465"}), coll({"1576243", "13254"}), coll({"1243"}),
                        coll({"13254", "1243"})}) {
    REQUIRE(is_monotone(c));
    const ClusterTable t = cluster_counts(c, 13, 5);
    for (int v = 0; v < t.vertex_count(); ++v) {
      const auto word = t.vertices()[static_cast<std::size_t>(v)].entries();
      for (int n = 1; n <= 13; ++n) {
        for (int q = 0; q <= 5; ++q) CHECK(t.refined(v, n, q, word) == t.total(v, n, q));
      }
    }
  }
  // The same statement on the clusters themselves.
  for (const auto& c : {coll({"1243"}), coll({"12354", "132465"})}) {
    const OverlapGraph g(c);
    for (int n = 4; n <= 9; ++n) {
      for (int q = 1; q <= 3; ++q) {
        for (const auto& cl : enumerate_clusters_oracle(c, n, q)) {
          const Permutation& first = cl.patterns.front();
          for (int k = 1; k <= first.size(); ++k) {
            if (!g.vertex_index(prefix_pattern(first, k))) continue;
            const auto head = cl.sigma.entries().first(static_cast<std::size_t>(k));
            CHECK(std::vector<int>(head.begin(), head.end()) ==
                  std::vector<int>(first.entries().begin(), first.entries().begin() + k));
          }
        }
      }
    }
  }
}

TEST_CASE("emitted systems of worked examples") {
  const OdeSystem two = emit_single_pattern_ode(parse_permutation("132679485"));
  REQUIRE(two.equations.size() == 1);
  CHECK(two.equations[0].order == 8);
  CHECK(two.equations[0].terms == std::vector<OdeTerm>{{3, 4, 1, 0}, {0, 1, 3, 0}});
  CHECK(ode_to_text(two).rfind("y_(1)^(8) = t*(d^3/dx^3(x^4/4!*y_(1)^(1)) + x*y_(1)^(3))", 0) == 0);

  const OdeSystem three = emit_ode_system(coll({"1576243", "13254"}));
  REQUIRE(three.equations.size() == 2);
  CHECK(three.equations[0].order == 5);
  CHECK(three.equations[1].order == 5);
  const OdeSystem four = emit_ode_system(coll({"12354", "132465"}));
  REQUIRE(four.equations.size() == 2);
  CHECK(four.equations[0].order == 6);
  CHECK(four.equations[1].order == 6);
  CHECK(four.equations[0].terms ==
        std::vector<OdeTerm>{{2, 1, 1, 0}, {1, 1, 1, 0}, {1, 0, 3, 1}, {0, 0, 3, 1}});
  CHECK(four.equations[1].terms == std::vector<OdeTerm>{{1, 1, 1, 0}, {0, 0, 3, 1}});

  // The hand-written four-edge system for 1576243, 13254.
  const std::vector<Permutation> verts{Permutation{1}, Permutation{1, 3, 2}};
  const std::vector<MonotoneEdge> listed{{0, 0, 7, 1, 3}, {0, 0, 5, 1, 4}, {0, 1, 7, 3, 4}, {1, 0, 5, 1, 4}};
  const OdeSystem p = emit_ode_system(verts, listed);
  CHECK(p.equations[0].order == 4);
  CHECK(p.equations[0].terms == std::vector<OdeTerm>{{1, 4, 1, 0}, {0, 1, 1, 0}, {0, 3, 3, 1}});
  CHECK(p.equations[1].terms == std::vector<OdeTerm>{{0, 1, 1, 0}});
  const int N = 20;
  CHECK(verify_ode(p, vertex_series_all(monotone_cluster_counts(verts, listed, N, N), N), N).ok);
  CHECK(table_totals(monotone_cluster_counts(verts, listed, 12, 4)) !=
        table_totals(monotone_cluster_counts(coll({"1576243", "13254"}), 12, 4)));
}

TEST_CASE("emitted systems hold on recurrence series") {
  check_verifies(coll({"132679485"}), 22);
  check_verifies(coll({"1576243", "13254"}), 22);
  check_verifies(coll({"12354", "132465"}), 22);
  check_verifies(coll({"13254", "1243"}), 16);
  for (const char* s : monotone_singles) check_verifies(PatternCollection{parse_permutation(s)}, 18);
  for (const char* s : {"12345", "132679485", "1342765", "1243"}) {
    const Permutation p = parse_permutation(s);
    const OdeSystem sys = emit_single_pattern_ode(p);
    const int N = 20;
    const ClusterTable t = monotone_cluster_counts(PatternCollection{p}, N, N);
    const std::vector<BiSeries> y{vertex_series(t, 0, N)};
    const OdeReport r = verify_ode(sys, y, N);
    CHECK(r.ok);
    CHECK(y[0].coeff(0, 0) == 0);
    CHECK(y[0].coeff(1, 0) == 1);
  }
  CHECK(emit_single_pattern_ode(parse_permutation("1342765")).equations[0].terms == std::vector<OdeTerm>{{0, 2, 1, 0}});
}

TEST_CASE("verification reports the first mismatch") {
  const PatternCollection c = coll({"12354", "132465"});
  OdeSystem sys = emit_ode_system(c);
  const int N = 18;
  const auto series = vertex_series_all(monotone_cluster_counts(c, N, N), N);
  sys.equations[1].terms[0].degree = 2;
  const OdeReport r = verify_ode(sys, series, N);
  CHECK_FALSE(r.ok);
  CHECK(r.equations[0].ok);
  REQUIRE(r.equations[1].mismatch);
  CHECK(r.equations[1].mismatch->lhs != r.equations[1].mismatch->rhs);
  CHECK(report_to_text(sys, r).find("FAIL") != std::string::npos);
  OdeSystem bad_boundary = emit_ode_system(c);
  bad_boundary.equations[0].initial[5][1] = 7;
  const OdeReport b = verify_ode(bad_boundary, series, N);
  CHECK_FALSE(b.equations[0].boundary_ok);
  CHECK_THROWS_AS(verify_ode(emit_ode_system(c), series, 6), std::invalid_argument);
}

TEST_CASE("unsupported inputs") {
  CHECK_THROWS_AS(emit_ode_system(coll({"213"})), NotMonotoneError);
  CHECK_THROWS_AS(emit_ode_system(coll({"1342765", "152364"})), NotMonotoneError);
  CHECK_THROWS_AS(emit_single_pattern_ode(Permutation{1}), std::invalid_argument);
  CHECK_THROWS_AS(emit_single_pattern_ode(Permutation{2, 1, 3}), NotMonotoneError);
}

TEST_CASE("hand-eliminated equations") {
  const auto golden = golden_scalar_odes();
  REQUIRE(golden.size() == 3);
  const int N = 30;
  std::vector<bool> ok;
  for (const auto& ode : golden) {
    const PatternCollection c(ode.collection);
    const BiSeries y = vertex_series(monotone_cluster_counts(c, N, N), 0, N);
    const ScalarOdeCheck r = verify_scalar_ode(ode.terms, y);
    CHECK(r.checked_through >= 20);
    ok.push_back(r.ok);
  }
  // The two stated eliminations leave a residual; the corrected one does not.
  CHECK_FALSE(ok[0]);
  CHECK_FALSE(ok[1]);
  CHECK(ok[2]);
  CHECK(scalar_ode_to_text(golden[2]) == "y^(9) - t*d^5/dx^5(x*y^(1)) - t*d^4/dx^4(x*y^(1)) - t*y^(6) = 0");
}

TEST_CASE("json form") {
  const OdeSystem sys = emit_ode_system(coll({"12354", "132465"}));
  const auto j = nlohmann::json::parse(ode_to_json(sys));
  CHECK(j["vertices"][1] == "1 3 2");
  CHECK(j["equations"].size() == 2);
  CHECK(j["equations"][0]["order"] == 6);
  CHECK(j["equations"][0]["terms"][2]["target"] == 1);
  CHECK(j["equations"][0]["initial"][1][0] == "1");
  CHECK(ode_to_json(sys) == ode_to_json(emit_ode_system(coll({"12354", "132465"}))));
}
