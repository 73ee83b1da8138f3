#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cpa/cli_io.hpp"

using namespace cpa;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cpa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& file, const std::string& text) const {
    std::ofstream(path / file) << text;
    return (path / file).string();
  }
};

PatternCollection coll(std::initializer_list<const char*> pats) {
  std::vector<Permutation> v;
  for (const char* s : pats) v.push_back(parse_permutation(s));
  return PatternCollection(std::move(v));
}

}  // namespace

TEST_CASE("collection files") {
  CHECK(parse_collection_text("# header\n\n145623\n1 3 5 4 2  # trailing\n") == coll({"145623", "13542"}));
  CHECK_THROWS_AS(parse_collection_text("# nothing\n"), std::invalid_argument);
  try {
    parse_collection_text("123\n12x\n");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_collection_text("145623\n13452\n"), NotReducedError);
  CHECK_THROWS_AS(read_collection_file("/nonexistent/cpa.txt"), std::runtime_error);
}

TEST_CASE("count, clusters and graph commands") {
  TempDir d("cpa_cli_count");
  const std::string p = d.write("p.txt", "123\n");
  const Run r = run({"count", "--patterns", p, "--n", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("3\t0\t5\n") != std::string::npos);
  const Run a = run({"count", "--patterns", p, "--n", "5", "--avoiders"});
  CHECK(a.out == "n\talpha\n0\t1\n1\t1\n2\t2\n3\t5\n4\t17\n5\t70\n");
  const Run j = run({"count", "-p", "123", "--n", "4", "--format", "json"});
  CHECK(nlohmann::json::parse(j.out).size() == 15);
  const Run c = run({"clusters", "-p", "123", "--n", "6", "--q", "3"});
  CHECK(c.code == 0);
  CHECK(parse_totals_tsv(c.out)(5, 2) == 1);
  CHECK(parse_totals_tsv(c.out)(5, 3) == 1);
  const Run g = run({"graph", "-p", "132679485"});
  CHECK(g.out.rfind("digraph overlap {", 0) == 0);
  CHECK(g.out.find("\"1\" -> \"1 3 2\" [label=\"({1},{4,5,8};9)\"];") != std::string::npos);
  const Run s = run({"gf", "-p", "123", "--n", "4", "--series", "cluster"});
  CHECK(s.out == "n\tq\tcoefficient\n1\t0\t1\n3\t1\t1/6\n4\t2\t1/24\n");
}

TEST_CASE("equiv, monotone, verify-ode and classify commands") {
  TempDir d("cpa_cli_equiv");
  const std::string a = d.write("a.txt", "143265987\n");
  const std::string b = d.write("b.txt", "134265897\n");
  const std::string c = d.write("c.txt", "123\n");
  const std::string e = d.write("e.txt", "132\n");
  const Run r = run({"equiv", a, b, "--n", "12"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("equivalent (overlap criterion holds)\n", 0) == 0);
  CHECK(run({"equiv", c, e, "--n", "6"}).out.rfind("not equivalent", 0) == 0);
  const Run m = run({"monotone", "-p", "213"});
  CHECK(m.out == "not monotone: 2 1 3 | 2 1 3 overlap at k=1 with entry 2\n");
  const Run mj = run({"monotone", "-p", "12354", "-p", "132465", "--format", "json"});
  CHECK(nlohmann::json::parse(mj.out)["equations"].size() == 2);
  const Run v = run({"verify-ode", "-p", "132679485", "--n", "20", "--single"});
  CHECK(v.code == 0);
  CHECK(v.out.find("y_(1): pass through x^12") != std::string::npos);
  const Run s = run({"classify-s5", "--format", "json"});
  CHECK(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["orbit_count"] == 32);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"count", "--n", "3"}).code == 2);
  CHECK(run({"count", "-p", "123", "--n", "0"}).code == 2);
  CHECK(run({"graph", "-p", "123", "--format", "tsv"}).code == 2);
  const Run nr = run({"count", "-p", "145623", "-p", "13452"});
  CHECK(nr.code == 1);
  CHECK(nr.err.find("(1 3 4 5 2) divides (1 4 5 6 2 3)") != std::string::npos);
  CHECK(run({"count", "-p", "1x3"}).code == 1);
  CHECK(run({"monotone", "-p", "1"}).code == 1);
  CHECK(run({"oracle", "-p", "123", "--n", "11"}).code == 2);
  const Run o = run({"oracle", "-p", "132", "-p", "213", "--n", "6"});
  CHECK(o.code == 0);
  CHECK(o.out.find("DIFFER") == std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cache keys follow the overlap graph") {
  CHECK(cache_key(coll({"123"})) == cache_key(coll({"123"})));
  CHECK(cache_key(coll({"143265987"})) == cache_key(coll({"134265897"})));
  CHECK(cache_key(coll({"123"})) != cache_key(coll({"132"})));
  CHECK(cache_key(coll({"123"})).size() == 16);
}

TEST_CASE("cache files") {
  TempDir d("cpa_cli_cache");
  const TableCache cache(d.path / "tables");
  const PatternCollection c = coll({"1342", "2413"});
  CHECK_FALSE(cache.load(cache_key(c), 9, 4));
  const CountGrid first = cluster_totals_cached(c, 9, 4, 0, &cache);
  CHECK(fs::exists(cache.path_for(cache_key(c), 9, 4)));
  CHECK(cache.load(cache_key(c), 9, 4) == first);
  CHECK(cluster_totals_cached(c, 9, 4, 0, &cache) == table_totals(cluster_counts(c, 9, 4)));
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(cache.dir())) {
    ++files;
    CHECK(entry.path().extension() == ".tsv");
  }
  CHECK(files == 1);
  // A hit for an isomorphic graph reuses the stored table.
  const PatternCollection a = coll({"143265987"});
  const PatternCollection b = coll({"134265897"});
  const CountGrid ga = cluster_totals_cached(a, 12, 3, 0, &cache);
  CHECK(cluster_totals_cached(b, 12, 3, 0, &cache) == ga);
  CHECK(ga == table_totals(cluster_counts(b, 12, 3)));

  const Run r1 = run({"--cache-dir", cache.dir().string(), "clusters", "-p", "1342", "-p", "2413", "--n", "9", "--q", "4"});
  const Run r2 = run({"clusters", "-p", "1342", "-p", "2413", "--n", "9", "--q", "4"});
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
}

TEST_CASE("output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"count", "-p", "1432", "-p", "213", "--n", "7"},
           {"graph", "-p", "12354", "-p", "132465"},
           {"classify-s5"},
           {"monotone", "-p", "1576243", "-p", "13254", "--format", "json"}}) {
    CHECK(run(args).out == run(args).out);
  }
}
