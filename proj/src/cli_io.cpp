#include "cpa/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "cpa/equivalence.hpp"
#include "cpa/gf_series.hpp"
#include "cpa/monotone_ode.hpp"

namespace cpa {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

PatternCollection collection_from(const std::vector<std::string>& files, const std::vector<std::string>& inline_patterns) {
  std::vector<Permutation> pats;
  for (const auto& f : files) {
    const PatternCollection c = read_collection_file(f);
    pats.insert(pats.end(), c.patterns().begin(), c.patterns().end());
  }
  for (const auto& p : inline_patterns) pats.push_back(parse_permutation(p));
  if (pats.empty()) throw UsageError("no patterns given (use --patterns FILE or --pattern P)");
  return PatternCollection(std::move(pats));
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (cfg.format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError("format '" + cfg.format + "' not supported here (choose " + list + ")");
}

std::string grid_to_json(const CountGrid& g, const char* name) {
  nlohmann::ordered_json j = nlohmann::json::array();
  for (int n = 0; n <= g.max_n(); ++n) {
    for (int q = 0; q <= g.max_q(); ++q) {
      if (g(n, q) != 0) j.push_back(nlohmann::ordered_json{{"n", n}, {"q", q}, {name, g(n, q).get_str()}});
    }
  }
  return j.dump(2);
}

int run_count(const RunConfig& cfg, bool avoiders_only, std::ostream& out) {
  require_format(cfg, {"tsv", "json"});
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  const BiSeries pi = avoidance_gf(c, cfg.N, cfg.threads);
  if (cfg.format == "tsv") {
    out << (avoiders_only ? alpha_n_to_tsv(pi) : alpha_table_to_tsv(pi));
    return 0;
  }
  nlohmann::ordered_json j = nlohmann::json::array();
  for (int n = 0; n <= cfg.N; ++n) {
    if (avoiders_only) {
      j.push_back(nlohmann::ordered_json{{"n", n}, {"alpha", pi.count(n, 0).get_str()}});
      continue;
    }
    for (int q = 0; q <= n; ++q) {
      j.push_back(nlohmann::ordered_json{{"n", n}, {"q", q}, {"alpha", pi.count(n, q).get_str()}});
    }
  }
  out << j.dump(2) << '\n';
  return 0;
}

std::optional<TableCache> cache_for(const RunConfig& cfg) {
  if (cfg.cache_dir) return TableCache(*cfg.cache_dir);
  return TableCache::from_environment();
}

int run_clusters(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"tsv", "json"});
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  const auto cache = cache_for(cfg);
  const CountGrid g = cluster_totals_cached(c, cfg.N, cfg.Q < 0 ? cfg.N : cfg.Q, cfg.threads, cache ? &*cache : nullptr);
  if (cfg.format == "tsv") {
    out << totals_to_tsv(g);
  } else {
    out << grid_to_json(g, "cl") << '\n';
  }
  return 0;
}

int run_graph(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"dot", "text"});
  const OverlapGraph g(collection_from(cfg.inputs, cfg.patterns));
  if (cfg.format == "dot") {
    out << graph_to_dot(g);
    return 0;
  }
  out << g.vertex_count() << " vertices, " << g.edges().size() << " edges\n";
  for (const auto& e : g.edges()) {
    out << to_string(g.vertex(e.source)) << " -> " << to_string(g.vertex(e.target)) << "  " << to_string(e.label)
        << "  from " << to_string(g.collection()[e.pattern]) << '\n';
  }
  out << "key " << cache_key(g.collection()) << '\n';
  return 0;
}

int run_gf(const RunConfig& cfg, const std::string& which, std::ostream& out) {
  require_format(cfg, {"tsv", "text"});
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  const auto cache = cache_for(cfg);
  const BiSeries cl = cluster_gf(cluster_totals_cached(c, cfg.N, cfg.N, cfg.threads, cache ? &*cache : nullptr), cfg.N);
  BiSeries s = which == "cluster" ? cl : avoidance_gf_from_clusters(cl);
  if (cfg.format == "tsv") {
    out << "n\tq\tcoefficient\n";
    for (int n = 0; n <= s.order(); ++n) {
      const auto sl = s.slice(n);
      for (std::size_t q = 0; q < sl.size(); ++q) {
        if (sl[q] != 0) out << n << '\t' << q << '\t' << sl[q].get_str() << '\n';
      }
    }
    return 0;
  }
  bool first = true;
  for (int n = 0; n <= s.order(); ++n) {
    const auto sl = s.slice(n);
    for (std::size_t q = 0; q < sl.size(); ++q) {
      if (sl[q] == 0) continue;
      out << (first ? "" : " + ") << '(' << sl[q].get_str() << ")*x^" << n << "*t^" << q;
      first = false;
    }
  }
  out << " + O(x^" << s.order() + 1 << ")\n";
  return 0;
}

int run_equiv(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"text", "json", "tsv"});
  if (cfg.inputs.size() != 2) throw UsageError("equiv takes exactly two collection files");
  const PatternCollection a = read_collection_file(cfg.inputs[0]);
  const PatternCollection b = read_collection_file(cfg.inputs[1]);
  const Verdict v = decide_equivalence(a, b, cfg.N, cfg.threads);
  std::optional<CriterionReport> report;
  if (a.size() == b.size()) {
    PatternBijection phi;
    if (v.bijection) {
      phi = *v.bijection;
    } else {
      for (int i = 0; i < a.size(); ++i) phi.emplace_back(a[i], b[i]);
    }
    report = check_overlap_criterion(a, b, phi);
  }
  if (cfg.format == "json") {
    nlohmann::ordered_json j{{"verdict", v.text()}, {"order", cfg.N}, {"series_equal", v.series.equal}};
    if (report) {
      j["lengths"] = report->lengths;
      j["linkages"] = report->linkages;
      j["overlap_sets"] = report->overlap_sets;
      j["failures"] = report->failures;
    }
    out << j.dump(2) << '\n';
    return 0;
  }
  out << v.text() << '\n';
  if (report) {
    out << "lengths: " << (report->lengths ? "yes" : "no") << "\nlinkages: " << (report->linkages ? "yes" : "no")
        << "\noverlap sets: " << (report->overlap_sets ? "yes" : "no") << '\n';
    for (const auto& f : report->failures) out << "  " << f << '\n';
  }
  return 0;
}

int run_monotone(const RunConfig& cfg, bool single, std::ostream& out) {
  require_format(cfg, {"text", "json", "tsv"});
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  const MonotoneCheck m = check_monotone(c);
  if (!m.monotone) {
    const auto& w = *m.witness;
    if (cfg.format == "json") {
      out << nlohmann::ordered_json{{"monotone", false},
                                    {"witness",
                                     {{"left", to_string(w.left)}, {"right", to_string(w.right)}, {"k", w.k},
                                      {"entry", w.entry}}}}
                 .dump(2)
          << '\n';
    } else {
      out << "not monotone: " << to_string(w.left) << " | " << to_string(w.right) << " overlap at k=" << w.k
          << " with entry " << w.entry << '\n';
    }
    return 0;
  }
  if (single && c.size() != 1) throw UsageError("--single needs exactly one pattern");
  const OdeSystem sys = single ? emit_single_pattern_ode(c[0]) : emit_ode_system(c);
  if (cfg.format == "json") {
    out << ode_to_json(sys) << '\n';
  } else {
    out << "monotone\n" << ode_to_text(sys);
  }
  return 0;
}

int run_verify_ode(const RunConfig& cfg, bool single, std::ostream& out) {
  require_format(cfg, {"text", "tsv"});
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  if (single && c.size() != 1) throw UsageError("--single needs exactly one pattern");
  const OdeSystem sys = single ? emit_single_pattern_ode(c[0]) : emit_ode_system(c);
  const ClusterTable t = monotone_cluster_counts(c, cfg.N, cfg.N);
  const std::vector<BiSeries> series =
      single ? std::vector<BiSeries>{vertex_series(t, 0, cfg.N)} : vertex_series_all(t, cfg.N);
  const OdeReport r = verify_ode(sys, series, cfg.N);
  out << ode_to_text(sys) << report_to_text(sys, r);
  return r.ok ? 0 : 1;
}

int run_classify(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"text", "json", "tsv"});
  const S5Report r = classify_s5(cfg.threads);
  out << (cfg.format == "json" ? s5_report_to_json(r) + "\n" : s5_report_to_text(r));
  return 0;
}

int run_oracle(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"text", "tsv"});
  if (cfg.N > cfg.oracle_cap && !cfg.force) {
    throw UsageError("oracle n = " + std::to_string(cfg.N) + " exceeds the cap " + std::to_string(cfg.oracle_cap) +
                     "; pass --force to run anyway");
  }
  const PatternCollection c = collection_from(cfg.inputs, cfg.patterns);
  const int Q = cfg.Q < 0 ? cfg.N : cfg.Q;
  bool ok = true;
  const CountGrid oracle = count_clusters_oracle(c, cfg.N, Q, cfg.threads);
  const CountGrid engine = table_totals(cluster_counts(c, cfg.N, Q, EngineOptions{cfg.threads, false}));
  out << "clusters n<=" << cfg.N << " q<=" << Q << ": " << (oracle == engine ? "agree" : "DIFFER") << '\n';
  ok = ok && oracle == engine;
  const BiSeries pi = avoidance_gf(c, cfg.N, cfg.threads);
  for (int n = 1; n <= cfg.N; ++n) {
    const auto d = count_distribution_oracle(c, n, cfg.threads);
    bool same = true;
    for (int q = 0; q <= n; ++q) {
      const mpz_class want = static_cast<std::size_t>(q) < d.size() ? d[static_cast<std::size_t>(q)] : 0;
      same = same && pi.count(n, q) == want;
    }
    out << "distribution n=" << n << ": " << (same ? "agree" : "DIFFER") << '\n';
    ok = ok && same;
  }
  return ok ? 0 : 1;
}

}  // namespace

PatternCollection parse_collection_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<Permutation> pats;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      pats.push_back(parse_permutation(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (pats.empty()) throw std::invalid_argument("collection has no patterns");
  return PatternCollection(std::move(pats));
}

PatternCollection read_collection_file(const std::filesystem::path& path) {
  try {
    return parse_collection_text(read_file(path));
  } catch (const NotReducedError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string cache_key(const PatternCollection& collection) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical_graph_form(OverlapGraph(collection)));
  return os.str();
}

TableCache::TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<TableCache> TableCache::from_environment() {
  const char* env = std::getenv("CPA_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return TableCache(env);
}

std::filesystem::path TableCache::path_for(const std::string& key, int max_n, int max_q) const {
  return dir_ / (key + "_n" + std::to_string(max_n) + "_q" + std::to_string(max_q) + ".tsv");
}

std::optional<CountGrid> TableCache::load(const std::string& key, int max_n, int max_q) const {
  const auto p = path_for(key, max_n, max_q);
  if (!std::filesystem::exists(p)) return std::nullopt;
  CountGrid g = parse_totals_tsv(read_file(p));
  if (g.max_n() != max_n || g.max_q() != max_q) throw std::runtime_error("cache file " + p.string() + " has wrong bounds");
  return g;
}

void TableCache::store(const std::string& key, const CountGrid& grid) const {
  std::filesystem::create_directories(dir_);
  const auto final_path = path_for(key, grid.max_n(), grid.max_q());
  auto tmp = final_path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
    o << totals_to_tsv(grid);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

CountGrid cluster_totals_cached(const PatternCollection& collection, int max_n, int max_q, unsigned threads,
                                const TableCache* cache) {
  if (cache == nullptr) return table_totals(cluster_counts(collection, max_n, max_q, EngineOptions{threads, false}));
  const std::string key = cache_key(collection);
  if (auto hit = cache->load(key, max_n, max_q)) return *hit;
  CountGrid g = table_totals(cluster_counts(collection, max_n, max_q, EngineOptions{threads, false}));
  cache->store(key, g);
  return g;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consecutive pattern clusters, occurrence counts and equivalences"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string cache_dir;
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app.add_option("--cache-dir", cache_dir, "cluster table cache (default: $CPA_CACHE_DIR)");

  const auto add_patterns = [&](CLI::App* sub) {
    sub->add_option("--patterns", cfg.inputs, "collection file")->check(CLI::ExistingFile);
    sub->add_option("-p,--pattern", cfg.patterns, "inline pattern, e.g. 132 or \"1 3 2\"");
  };
  const auto add_format = [&](CLI::App* sub, const std::string& def) {
    sub->add_option("--format", cfg.format, "output format")->default_str(def);
  };

  bool avoiders = false;
  auto* count = app.add_subcommand("count", "alpha_{n,q} table, or alpha_n with --avoiders");
  add_patterns(count);
  count->add_option("--n", cfg.N, "largest length")->check(CLI::Range(1, 200));
  count->add_flag("--avoiders", avoiders, "only the q = 0 column");
  add_format(count, "tsv");

  auto* clusters = app.add_subcommand("clusters", "cl_{n,q} table");
  add_patterns(clusters);
  clusters->add_option("--n", cfg.N, "largest length")->check(CLI::Range(1, 200));
  clusters->add_option("--q", cfg.Q, "largest cluster size (default n)")->check(CLI::Range(0, 200));
  add_format(clusters, "tsv");

  auto* graph = app.add_subcommand("graph", "overlap graph");
  add_patterns(graph);
  add_format(graph, "dot");

  std::string which = "avoidance";
  auto* gf = app.add_subcommand("gf", "series coefficients");
  add_patterns(gf);
  gf->add_option("--n", cfg.N, "truncation order")->check(CLI::Range(1, 200));
  gf->add_option("--series", which, "avoidance or cluster")->check(CLI::IsMember({"avoidance", "cluster"}));
  add_format(gf, "tsv");

  auto* equiv = app.add_subcommand("equiv", "compare two collection files");
  equiv->add_option("files", cfg.inputs, "two collection files")->required()->expected(2)->check(CLI::ExistingFile);
  equiv->add_option("--n", cfg.N, "order of the series comparison")->check(CLI::Range(1, 200));
  add_format(equiv, "text");

  bool single = false;
  auto* monotone = app.add_subcommand("monotone", "monotonicity check and differential system");
  add_patterns(monotone);
  monotone->add_flag("--single", single, "one equation in y_(1) for a single pattern");
  add_format(monotone, "text");

  auto* verify = app.add_subcommand("verify-ode", "check the emitted system against the series");
  add_patterns(verify);
  verify->add_option("--n", cfg.N, "series order")->check(CLI::Range(1, 200));
  verify->add_flag("--single", single, "single-pattern equation");
  add_format(verify, "text");

  auto* classify = app.add_subcommand("classify-s5", "strong equivalence classes of S_5");
  add_format(classify, "text");

  auto* oracle = app.add_subcommand("oracle", "brute-force cross-checks");
  add_patterns(oracle);
  oracle->add_option("--n", cfg.N, "largest length")->check(CLI::Range(1, 200));
  oracle->add_option("--q", cfg.Q, "largest cluster size (default n)")->check(CLI::Range(0, 200));
  oracle->add_option("--cap", cfg.oracle_cap, "largest n without --force")->check(CLI::Range(1, 200));
  oracle->add_flag("--force", cfg.force, "allow n above the cap");
  add_format(oracle, "text");

  // Formats default per subcommand; an explicit --format overrides.
  cfg.format.clear();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (cfg.format.empty()) cfg.format = sub->get_option("--format")->get_default_str();
  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;

  try {
    if (sub == count) return run_count(cfg, avoiders, out);
    if (sub == clusters) return run_clusters(cfg, out);
    if (sub == graph) return run_graph(cfg, out);
    if (sub == gf) return run_gf(cfg, which, out);
    if (sub == equiv) return run_equiv(cfg, out);
    if (sub == monotone) return run_monotone(cfg, single, out);
    if (sub == verify) return run_verify_ode(cfg, single, out);
    if (sub == classify) return run_classify(cfg, out);
    if (sub == oracle) return run_oracle(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const NotReducedError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cpa
