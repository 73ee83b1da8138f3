#include "cpa/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cpa/gf_series.hpp"
#include "cpa/monotone_ode.hpp"
#include "cpa/parallel.hpp"

namespace cpa {

namespace {

std::map<Permutation, Permutation> bijection_map(const PatternCollection& pi1, const PatternCollection& pi2,
                                                 const PatternBijection& phi) {
  if (static_cast<int>(phi.size()) != pi1.size() || pi1.size() != pi2.size()) {
    throw std::invalid_argument("bijection: sizes differ");
  }
  std::map<Permutation, Permutation> f;
  std::set<Permutation> image;
  for (const auto& [a, b] : phi) {
    if (!pi1.index_of(a) || !pi2.index_of(b)) throw std::invalid_argument("bijection: pattern outside the collections");
    if (!f.emplace(a, b).second || !image.insert(b).second) throw std::invalid_argument("bijection: not injective");
  }
  return f;
}

std::vector<int> final_set(const Permutation& p, int k) {
  auto e = p.entries().last(static_cast<std::size_t>(k));
  std::vector<int> s(e.begin(), e.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<int> initial_set(const Permutation& p, int k) {
  auto e = p.entries().first(static_cast<std::size_t>(k));
  std::vector<int> s(e.begin(), e.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::string set_text(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string pair_text(const Permutation& a, const Permutation& b) {
  return "(" + to_compact_string(a) + "," + to_compact_string(b) + ")";
}

// Lengths and linkages, shared by both forms.  `sets` checks one realized
// overlap and returns a failure message or "".
CriterionReport check_common(
    const PatternCollection& pi1, const PatternCollection& pi2, const PatternBijection& phi,
    const std::function<std::string(const Permutation&, const Permutation&, const Permutation&, const Permutation&, int)>&
        sets) {
  const auto f = bijection_map(pi1, pi2, phi);
  CriterionReport r;
  for (const auto& [a, b] : f) {
    if (a.size() != b.size()) {
      r.lengths = false;
      r.failures.push_back("lengths: " + to_compact_string(a) + " -> " + to_compact_string(b));
    }
  }
  for (const auto& p : pi1.patterns()) {
    for (const auto& q : pi1.patterns()) {
      const Permutation& fp = f.at(p);
      const Permutation& fq = f.at(q);
      if (linkage_lengths(p, q) != linkage_lengths(fp, fq)) {
        r.linkages = false;
        r.failures.push_back("linkages: " + pair_text(p, q) + " vs " + pair_text(fp, fq));
      }
      for (int k : overlap_lengths(p, q)) {
        std::string msg;
        if (k > fp.size() || k > fq.size()) {
          msg = "overlap " + pair_text(p, q) + " k=" + std::to_string(k) + " has no image";
        } else {
          msg = sets(p, q, fp, fq, k);
        }
        if (!msg.empty()) {
          r.overlap_sets = false;
          r.failures.push_back(msg);
        }
      }
    }
  }
  return r;
}

template <class Check>
std::optional<PatternBijection> search_bijection(const PatternCollection& pi1, const PatternCollection& pi2,
                                                 Check check) {
  if (pi1.size() != pi2.size()) return std::nullopt;
  std::vector<int> order(static_cast<std::size_t>(pi2.size()));
  std::iota(order.begin(), order.end(), 0);
  do {
    PatternBijection phi;
    bool lengths = true;
    for (int i = 0; i < pi1.size(); ++i) {
      const Permutation& b = pi2[order[static_cast<std::size_t>(i)]];
      lengths = lengths && pi1[i].size() == b.size();
      phi.emplace_back(pi1[i], b);
    }
    if (lengths && check(pi1, pi2, phi).holds()) return phi;
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

using LabelBag = std::map<std::pair<int, int>, std::vector<std::string>>;

LabelBag label_bag(const OverlapGraph& g) {
  LabelBag bag;
  for (const auto& e : g.edges()) bag[{e.source, e.target}].push_back(to_string(e.label));
  for (auto& [key, labels] : bag) std::sort(labels.begin(), labels.end());
  return bag;
}

std::vector<std::string> vertex_signatures(const OverlapGraph& g) {
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(g.vertex_count()));
  std::vector<std::vector<std::string>> in(out.size());
  std::vector<std::vector<std::string>> loops(out.size());
  for (const auto& e : g.edges()) {
    const std::string l = to_string(e.label);
    out[static_cast<std::size_t>(e.source)].push_back(l);
    in[static_cast<std::size_t>(e.target)].push_back(l);
    if (e.source == e.target) loops[static_cast<std::size_t>(e.source)].push_back(l);
  }
  std::vector<std::string> sig;
  for (std::size_t v = 0; v < out.size(); ++v) {
    std::string s = v == 0 ? "*" : "";
    for (auto* list : {&out[v], &in[v], &loops[v]}) {
      std::sort(list->begin(), list->end());
      s += "[";
      for (const auto& x : *list) s += x;
      s += "]";
    }
    sig.push_back(std::move(s));
  }
  return sig;
}

const std::vector<std::string>& bag_at(const LabelBag& bag, int u, int v) {
  static const std::vector<std::string> empty;
  auto it = bag.find({u, v});
  return it == bag.end() ? empty : it->second;
}

mpz_class grid_value(const ClusterTable& t, int n, int q) {
  return n <= t.max_n() && q <= t.max_q() ? t.total(0, n, q) : mpz_class(0);
}

}  // namespace

CriterionReport check_overlap_criterion(const PatternCollection& pi1, const PatternCollection& pi2,
                                        const PatternBijection& phi) {
  return check_common(pi1, pi2, phi,
                      [](const Permutation& p, const Permutation& q, const Permutation& fp, const Permutation& fq,
                         int k) -> std::string {
                        std::string msg;
                        if (final_set(p, k) != final_set(fp, k)) {
                          msg = "overlap sets: " + pair_text(p, q) + " k=" + std::to_string(k) + " final " +
                                set_text(final_set(p, k)) + " vs " + set_text(final_set(fp, k));
                        } else if (initial_set(q, k) != initial_set(fq, k)) {
                          msg = "overlap sets: " + pair_text(p, q) + " k=" + std::to_string(k) + " initial " +
                                set_text(initial_set(q, k)) + " vs " + set_text(initial_set(fq, k));
                        }
                        return msg;
                      });
}

CriterionReport check_monotone_criterion(const PatternCollection& pi1, const PatternCollection& pi2,
                                         const PatternBijection& phi) {
  for (const auto* c : {&pi1, &pi2}) {
    const MonotoneCheck m = check_monotone(*c);
    if (!m.monotone) throw NotMonotoneError(*m.witness);
  }
  return check_common(pi1, pi2, phi,
                      [](const Permutation& p, const Permutation& q, const Permutation& fp, const Permutation&,
                         int k) -> std::string {
                        const int a = final_set(p, k).back();
                        const int b = final_set(fp, k).back();
                        if (a == b) return "";
                        return "overlap maxima: " + pair_text(p, q) + " k=" + std::to_string(k) + " " +
                               std::to_string(a) + " vs " + std::to_string(b);
                      });
}

std::optional<PatternBijection> find_overlap_bijection(const PatternCollection& pi1, const PatternCollection& pi2) {
  return search_bijection(pi1, pi2, check_overlap_criterion);
}

std::optional<PatternBijection> find_monotone_bijection(const PatternCollection& pi1, const PatternCollection& pi2) {
  if (!is_monotone(pi1) || !is_monotone(pi2)) return std::nullopt;
  return search_bijection(pi1, pi2, check_monotone_criterion);
}

std::optional<std::vector<int>> graphs_isomorphic(const OverlapGraph& g1, const OverlapGraph& g2) {
  const int V = g1.vertex_count();
  if (V != g2.vertex_count() || g1.edges().size() != g2.edges().size()) return std::nullopt;
  const auto s1 = vertex_signatures(g1);
  const auto s2 = vertex_signatures(g2);
  if (s1[0] != s2[0]) return std::nullopt;
  const LabelBag b1 = label_bag(g1);
  const LabelBag b2 = label_bag(g2);
  std::vector<int> f(static_cast<std::size_t>(V), -1);
  std::vector<bool> used(static_cast<std::size_t>(V), false);
  std::function<bool(int)> extend = [&](int u) {
    if (u == V) return true;
    for (int c = 0; c < V; ++c) {
      if (used[static_cast<std::size_t>(c)] || s1[static_cast<std::size_t>(u)] != s2[static_cast<std::size_t>(c)]) continue;
      if ((u == 0) != (c == 0)) continue;
      f[static_cast<std::size_t>(u)] = c;
      bool ok = true;
      for (int w = 0; w <= u && ok; ++w) {
        const int fw = f[static_cast<std::size_t>(w)];
        ok = bag_at(b1, u, w) == bag_at(b2, c, fw) && bag_at(b1, w, u) == bag_at(b2, fw, c);
      }
      if (ok) {
        used[static_cast<std::size_t>(c)] = true;
        if (extend(u + 1)) return true;
        used[static_cast<std::size_t>(c)] = false;
      }
      f[static_cast<std::size_t>(u)] = -1;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return f;
}

std::string canonical_graph_form(const OverlapGraph& g) {
  const int V = g.vertex_count();
  const auto sig = vertex_signatures(g);
  // Vertex 0 first, the rest grouped by signature; only orders inside a group vary.
  std::vector<int> rest(static_cast<std::size_t>(V - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)];
  });
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < rest.size();) {
    std::size_t j = i;
    while (j < rest.size() && sig[static_cast<std::size_t>(rest[j])] == sig[static_cast<std::size_t>(rest[i])]) ++j;
    std::sort(rest.begin() + static_cast<long>(i), rest.begin() + static_cast<long>(j));
    groups.emplace_back(i, j);
    i = j;
  }
  std::optional<std::string> best;
  std::function<void(std::size_t)> visit = [&](std::size_t gi) {
    if (gi == groups.size()) {
      std::vector<int> pos(static_cast<std::size_t>(V));
      pos[0] = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) pos[static_cast<std::size_t>(rest[i])] = static_cast<int>(i + 1);
      std::vector<std::string> edges;
      for (const auto& e : g.edges()) {
        edges.push_back(std::to_string(pos[static_cast<std::size_t>(e.source)]) + ">" +
                        std::to_string(pos[static_cast<std::size_t>(e.target)]) + to_string(e.label));
      }
      std::sort(edges.begin(), edges.end());
      std::string s = "V" + std::to_string(V);
      for (const auto& e : edges) s += ";" + e;
      if (!best || s < *best) best = std::move(s);
      return;
    }
    auto [lo, hi] = groups[gi];
    do {
      visit(gi + 1);
    } while (std::next_permutation(rest.begin() + static_cast<long>(lo), rest.begin() + static_cast<long>(hi)));
  };
  visit(0);
  return *best;
}

SeriesComparison verify_strong_equivalence(const PatternCollection& pi1, const PatternCollection& pi2, int N,
                                           int oracle_n, unsigned threads) {
  if (N < 1) throw std::invalid_argument("verify_strong_equivalence: N must be positive");
  const BiSeries a = avoidance_gf(pi1, N, threads);
  const BiSeries b = avoidance_gf(pi2, N, threads);
  SeriesComparison r;
  r.order = N;
  for (int n = 0; n <= N && r.equal; ++n) {
    for (int q = 0; q <= n; ++q) {
      const mpz_class x = a.count(n, q);
      const mpz_class y = b.count(n, q);
      if (x != y) {
        r.equal = false;
        r.difference = std::make_tuple(n, q, x, y);
        break;
      }
    }
  }
  for (int n = 1; n <= std::min(oracle_n, N); ++n) {
    for (const auto& [c, s] : {std::pair{&pi1, &a}, std::pair{&pi2, &b}}) {
      const auto d = count_distribution_oracle(*c, n, threads);
      for (int q = 0; q <= n; ++q) {
        const mpz_class want = static_cast<std::size_t>(q) < d.size() ? d[static_cast<std::size_t>(q)] : 0;
        if (s->count(n, q) != want) throw std::logic_error("verify_strong_equivalence: series disagrees with the scan");
      }
    }
    r.oracle_checked = true;
  }
  return r;
}

std::string Verdict::text() const {
  switch (basis) {
    case Basis::OverlapCriterion:
      return "equivalent (overlap criterion holds)";
    case Basis::MonotoneCriterion:
      return "equivalent (monotone overlap maxima criterion holds)";
    case Basis::IsomorphicGraphs:
      return "equivalent (overlap graphs isomorphic)";
    case Basis::FiniteOrder:
      return "equivalent to order " + std::to_string(series.order);
    case Basis::Distinct:
      break;
  }
  std::string s = "not equivalent";
  if (series.difference) {
    const auto& [n, q, x, y] = *series.difference;
    s += ": alpha(" + std::to_string(n) + "," + std::to_string(q) + ") = " + x.get_str() + " vs " + y.get_str();
  }
  return s;
}

Verdict decide_equivalence(const PatternCollection& pi1, const PatternCollection& pi2, int N, unsigned threads) {
  Verdict v;
  v.series = verify_strong_equivalence(pi1, pi2, N, 0, threads);
  v.bijection = find_overlap_bijection(pi1, pi2);
  if (v.bijection) {
    v.basis = Basis::OverlapCriterion;
  } else if ((v.bijection = find_monotone_bijection(pi1, pi2))) {
    v.basis = Basis::MonotoneCriterion;
  } else if (graphs_isomorphic(OverlapGraph(pi1), OverlapGraph(pi2))) {
    v.basis = Basis::IsomorphicGraphs;
  } else {
    v.basis = v.series.equal ? Basis::FiniteOrder : Basis::Distinct;
  }
  if (v.basis != Basis::Distinct && !v.series.equal) {
    throw std::logic_error("decide_equivalence: sufficient condition holds but the series differ");
  }
  return v;
}

bool separation_property(const Permutation& alpha, const Permutation& beta) {
  std::vector<int> a(alpha.entries().begin(), alpha.entries().end());
  a.push_back(alpha.size() + 1);
  std::vector<int> b{beta.size() + 1};
  b.insert(b.end(), beta.entries().begin(), beta.entries().end());
  return occurrences(Permutation(a), beta).empty() && occurrences(Permutation(b), alpha).empty();
}

std::vector<Permutation> separated_set(const Permutation& alpha, const Permutation& beta, int l) {
  if (l < 1) throw std::invalid_argument("separated_set: l must be positive");
  const int k = alpha.size();
  const int kk = beta.size();
  std::vector<Permutation> out;
  for_each_permutation(l, [&](const Permutation& mid) {
    std::vector<int> e(alpha.entries().begin(), alpha.entries().end());
    for (int x : mid.entries()) e.push_back(x + k + kk);
    for (int x : beta.entries()) e.push_back(x + k);
    out.emplace_back(std::move(e));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Permutation> orbit(const Permutation& p) {
  std::vector<Permutation> o{p, reverse(p), complement(p), reverse(complement(p))};
  std::sort(o.begin(), o.end());
  o.erase(std::unique(o.begin(), o.end()), o.end());
  return o;
}

Permutation orbit_representative(const Permutation& p) { return orbit(p).front(); }

std::optional<int> separating_length(const PatternCollection& a, const PatternCollection& b, int q, int max_n) {
  const CountGrid x = table_totals(cluster_counts(a, max_n, q, EngineOptions{1, false}));
  const CountGrid y = table_totals(cluster_counts(b, max_n, q, EngineOptions{1, false}));
  for (int n = 1; n <= max_n; ++n) {
    if (x(n, q) != y(n, q)) return n;
  }
  return std::nullopt;
}

S5Report classify_s5(unsigned threads) {
  S5Report r;
  std::set<Permutation> reps;
  for (const auto& p : all_permutations(5)) reps.insert(orbit_representative(p));
  for (const auto& p : reps) {
    OrbitInfo o;
    o.representative = p;
    o.size = static_cast<int>(orbit(p).size());
    for (int k : overlap_lengths(p, p)) {
      if (k >= 2) o.self_overlaps.push_back(k);
    }
    r.orbits.push_back(std::move(o));
  }
  // Every q-cluster of one length-5 pattern has length at most 4q + 1.
  constexpr int kMaxQ = 4;
  constexpr int kMaxN = 4 * kMaxQ + 1;
  std::vector<std::optional<ClusterTable>> tables(r.orbits.size());
  parallel_for(r.orbits.size(), threads, [&](std::size_t i) {
    tables[i].emplace(cluster_counts(PatternCollection{r.orbits[i].representative}, kMaxN, kMaxQ, EngineOptions{1, false}));
  });

  std::map<std::vector<int>, std::vector<std::size_t>> by_profile;
  for (std::size_t i = 0; i < r.orbits.size(); ++i) by_profile[r.orbits[i].self_overlaps].push_back(i);
  std::vector<std::pair<std::vector<int>, std::vector<std::size_t>>> ordered(by_profile.begin(), by_profile.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });

  for (const auto& [profile, members] : ordered) {
    std::string key;
    for (int k : profile) key += (key.empty() ? "" : ",") + std::to_string(k);
    if (key.empty()) key = "none";
    std::vector<Permutation> reps_in;
    for (auto i : members) reps_in.push_back(r.orbits[i].representative);
    r.buckets.emplace_back(key, reps_in);

    std::vector<std::size_t> parent(members.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto& ti = *tables[members[i]];
        const auto& tj = *tables[members[j]];
        PairResult pr;
        pr.a = reps_in[i];
        pr.b = reps_in[j];
        const PatternCollection ca{pr.a};
        const PatternCollection cb{pr.b};
        pr.equivalent = check_overlap_criterion(ca, cb, {{pr.a, pr.b}}).holds();
        for (int q = 1; q <= kMaxQ && !pr.separating; ++q) {
          for (int n = 1; n <= kMaxN; ++n) {
            const mpz_class x = grid_value(ti, n, q);
            const mpz_class y = grid_value(tj, n, q);
            if (x != y) {
              pr.separating = std::make_tuple(n, q, x, y);
              break;
            }
          }
        }
        if (pr.equivalent && pr.separating) throw std::logic_error("classify_s5: criterion holds for separated pair");
        if (pr.equivalent) parent[find(i)] = find(j);
        if (!pr.equivalent && !pr.separating) r.undecided.emplace_back(pr.a, pr.b);
        r.pairs.push_back(std::move(pr));
      }
    }
    std::map<std::size_t, std::vector<Permutation>> cls;
    for (std::size_t i = 0; i < members.size(); ++i) cls[find(i)].push_back(reps_in[i]);
    std::vector<std::vector<Permutation>> sorted_cls;
    for (auto& [root, c] : cls) sorted_cls.push_back(std::move(c));
    std::sort(sorted_cls.begin(), sorted_cls.end());
    for (auto& c : sorted_cls) r.classes.push_back(std::move(c));
  }
  return r;
}

std::string s5_report_to_json(const S5Report& report) {
  nlohmann::ordered_json j;
  j["orbit_count"] = report.orbits.size();
  j["orbits"] = nlohmann::json::array();
  for (const auto& o : report.orbits) {
    j["orbits"].push_back(nlohmann::ordered_json{{"representative", to_compact_string(o.representative)},
                                                 {"size", o.size},
                                                 {"self_overlaps", o.self_overlaps}});
  }
  j["buckets"] = nlohmann::json::array();
  for (const auto& [key, reps] : report.buckets) {
    std::vector<std::string> names;
    for (const auto& p : reps) names.push_back(to_compact_string(p));
    j["buckets"].push_back(nlohmann::ordered_json{{"self_overlaps", key}, {"size", reps.size()}, {"orbits", names}});
  }
  j["classes"] = nlohmann::json::array();
  for (const auto& c : report.classes) {
    if (c.size() < 2) continue;
    std::vector<std::string> names;
    for (const auto& p : c) names.push_back(to_compact_string(p));
    j["classes"].push_back(names);
  }
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    nlohmann::ordered_json e{{"a", to_compact_string(p.a)}, {"b", to_compact_string(p.b)}, {"equivalent", p.equivalent}};
    if (p.separating) {
      const auto& [n, q, x, y] = *p.separating;
      e["separating"] = nlohmann::ordered_json{{"n", n}, {"q", q}, {"a", x.get_str()}, {"b", y.get_str()}};
    }
    j["pairs"].push_back(e);
  }
  j["undecided"] = nlohmann::json::array();
  for (const auto& [a, b] : report.undecided) {
    j["undecided"].push_back(std::vector<std::string>{to_compact_string(a), to_compact_string(b)});
  }
  return j.dump(2);
}

std::string s5_report_to_text(const S5Report& report) {
  std::ostringstream os;
  int two = 0;
  for (const auto& o : report.orbits) two += o.size == 2;
  os << report.orbits.size() << " orbits (" << two << " of size 2)\n";
  for (const auto& [key, reps] : report.buckets) {
    os << "self-overlaps " << key << ": " << reps.size() << " orbits:";
    for (const auto& p : reps) os << ' ' << to_compact_string(p);
    os << '\n';
  }
  os << "classes with more than one orbit:\n";
  for (const auto& c : report.classes) {
    if (c.size() < 2) continue;
    os << ' ';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " ~ " : " ") << to_compact_string(c[i]);
    os << '\n';
  }
  os << report.undecided.size() << " undecided pairs\n";
  return os.str();
}

}  // namespace cpa
