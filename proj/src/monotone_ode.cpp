#include "cpa/monotone_ode.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "cpa/combinatorics.hpp"

namespace cpa {

namespace {

std::string witness_message(const MonotoneWitness& w) {
  return "not monotone: " + to_string(w.left) + " | " + to_string(w.right) + " overlap at k=" + std::to_string(w.k) +
         " with entry " + std::to_string(w.entry);
}

std::string vertex_name(const Permutation& v) { return "y_(" + to_compact_string(v) + ")"; }

std::string power_suffix(int order) { return order == 0 ? "" : "^(" + std::to_string(order) + ")"; }

std::string derivative_prefix(int a) {
  if (a == 1) return "d/dx";
  return "d^" + std::to_string(a) + "/dx^" + std::to_string(a);
}

std::string monomial(int b) {
  if (b == 0) return "";
  if (b == 1) return "x*";
  return "x^" + std::to_string(b) + "/" + std::to_string(b) + "!*";
}

std::string render_term(int outer, int degree, int inner, const std::string& y) {
  std::string body = monomial(degree) + y + power_suffix(inner);
  if (outer > 0) body = derivative_prefix(outer) + "(" + body + ")";
  return body;
}

mpq_class first_nonzero(const BiSeries& s, int through, int& n_out, int& q_out) {
  for (int n = 0; n <= through; ++n) {
    const auto sl = s.slice(n);
    for (std::size_t q = 0; q < sl.size(); ++q) {
      if (sl[q] != 0) {
        n_out = n;
        q_out = static_cast<int>(q);
        return sl[q];
      }
    }
  }
  n_out = -1;
  return 0;
}

}  // namespace

NotMonotoneError::NotMonotoneError(MonotoneWitness w)
    : std::invalid_argument(witness_message(w)), witness_(std::move(w)) {}

MonotoneCheck check_monotone(const PatternCollection& collection) {
  for (const auto& left : collection.patterns()) {
    for (const auto& right : collection.patterns()) {
      for (int k : overlap_lengths(left, right)) {
        const auto e = right.entries().first(static_cast<std::size_t>(k));
        const int top = *std::max_element(e.begin(), e.end());
        if (top > k) return MonotoneCheck{false, MonotoneWitness{left, right, k, top}};
      }
    }
  }
  return MonotoneCheck{};
}

std::vector<MonotoneEdge> monotone_recurrence_data(const OverlapGraph& graph) {
  const MonotoneCheck check = check_monotone(graph.collection());
  if (!check.monotone) throw NotMonotoneError(*check.witness);
  std::vector<MonotoneEdge> out;
  for (const Edge& e : graph.edges()) {
    MonotoneEdge m;
    m.source = e.source;
    m.target = e.target;
    m.length = e.label.length;
    m.k_target = e.suffix_len;
    if (m.length <= e.prefix_len + e.suffix_len) {
      m.m = m.length;
    } else {
      m.m = std::max(e.label.initial.back(), e.label.final.back());
    }
    out.push_back(m);
  }
  return out;
}

ClusterTable monotone_cluster_counts(std::vector<Permutation> vertices, std::span<const MonotoneEdge> edges, int max_n,
                                     int max_q) {
  if (vertices.empty() || vertices.front() != Permutation{1}) {
    throw std::invalid_argument("monotone_cluster_counts: vertex 0 must be (1)");
  }
  if (max_n < 1 || max_q < 0) throw std::invalid_argument("monotone_cluster_counts: bad bounds");
  const int V = static_cast<int>(vertices.size());
  for (const auto& e : edges) {
    if (e.source < 0 || e.source >= V || e.target < 0 || e.target >= V) {
      throw std::invalid_argument("monotone_cluster_counts: edge endpoint out of range");
    }
    if (e.k_target != vertices[static_cast<std::size_t>(e.target)].size() || e.m < 1 || e.m > e.length) {
      throw std::invalid_argument("monotone_cluster_counts: inconsistent edge data");
    }
  }
  ClusterTable table(std::move(vertices), max_n, max_q, false);
  table.total_ref(0, 1, 0) = 1;
  for (int q = 1; q <= max_q; ++q) {
    for (int n = 1; n <= max_n; ++n) {
      for (const auto& e : edges) {
        // An edge into an overlap as long as the pattern only closes a cluster.
        if (e.k_target >= e.length && q > 1) continue;
        const int n_next = n - e.length + e.k_target;
        if (n_next < 1 || n_next > max_n || n < e.length) continue;
        const mpz_class& below = table.total(e.target, n_next, q - 1);
        if (below == 0) continue;
        table.total_ref(e.source, n, q) += binomial(n - e.m, e.length - e.m) * below;
      }
    }
  }
  return table;
}

ClusterTable monotone_cluster_counts(const PatternCollection& collection, int max_n, int max_q) {
  const OverlapGraph g(collection);
  const auto edges = monotone_recurrence_data(g);
  return monotone_cluster_counts(std::vector<Permutation>(g.vertices().begin(), g.vertices().end()), edges, max_n,
                                 max_q);
}

OdeSystem emit_ode_system(std::vector<Permutation> vertices, std::span<const MonotoneEdge> edges) {
  for (const auto& e : edges) {
    if (e.k_target >= e.length) {
      throw std::invalid_argument("emit_ode_system: the pattern (1) has no equation of this form");
    }
  }
  OdeSystem sys;
  const int V = static_cast<int>(vertices.size());
  int top = 1;
  for (int v = 0; v < V; ++v) {
    OdeEquation eq;
    eq.vertex = v;
    for (const auto& e : edges) {
      if (e.source == v) eq.order = std::max(eq.order, e.m);
    }
    for (const auto& e : edges) {
      if (e.source != v) continue;
      eq.terms.push_back(OdeTerm{eq.order - e.m, e.length - e.m, e.k_target, e.target});
    }
    top = std::max(top, eq.order);
    sys.equations.push_back(std::move(eq));
  }
  const ClusterTable table = monotone_cluster_counts(vertices, edges, top, top);
  for (auto& eq : sys.equations) {
    for (int n = 0; n < eq.order; ++n) {
      std::vector<mpz_class> row;
      for (int q = 0; q <= n; ++q) row.push_back(n == 0 ? mpz_class(0) : table.total(eq.vertex, n, q));
      eq.initial.push_back(std::move(row));
    }
  }
  sys.vertices = std::move(vertices);
  return sys;
}

OdeSystem emit_ode_system(const PatternCollection& collection) {
  const OverlapGraph g(collection);
  const auto edges = monotone_recurrence_data(g);
  return emit_ode_system(std::vector<Permutation>(g.vertices().begin(), g.vertices().end()), edges);
}

OdeSystem emit_single_pattern_ode(const Permutation& pattern) {
  const PatternCollection c{pattern};
  const OverlapGraph g(c);
  auto edges = monotone_recurrence_data(g);
  std::vector<MonotoneEdge> own;
  for (auto e : edges) {
    if (e.source != 0) continue;
    e.target = 0;
    own.push_back(e);
  }
  // Every vertex is a prefix of the pattern, so for q >= 1 its clusters are
  // those of (1); only the k' argument of each term survives.
  OdeSystem sys;
  for (const auto& e : own) {
    if (e.k_target >= e.length) throw std::invalid_argument("emit_single_pattern_ode: the pattern (1) has no equation");
  }
  OdeEquation eq;
  for (const auto& e : own) eq.order = std::max(eq.order, e.m);
  for (const auto& e : own) eq.terms.push_back(OdeTerm{eq.order - e.m, e.length - e.m, e.k_target, 0});
  for (int n = 0; n < eq.order; ++n) {
    std::vector<mpz_class> row(static_cast<std::size_t>(n + 1));
    if (n == 1) row[0] = 1;
    eq.initial.push_back(std::move(row));
  }
  sys.vertices = {Permutation{1}};
  sys.equations.push_back(std::move(eq));
  return sys;
}

std::vector<BiSeries> vertex_series_all(const ClusterTable& table, int N) {
  std::vector<BiSeries> out;
  for (int v = 0; v < table.vertex_count(); ++v) out.push_back(vertex_series(table, v, N));
  return out;
}

OdeReport verify_ode(const OdeSystem& system, std::span<const BiSeries> series, int N) {
  if (series.size() < system.vertices.size()) throw std::invalid_argument("verify_ode: missing vertex series");
  int need = 0;
  for (const auto& eq : system.equations) {
    int deg = 0;
    for (const auto& t : eq.terms) deg = std::max(deg, t.degree);
    need = std::max(need, eq.order + deg);
  }
  if (N < need) {
    throw std::invalid_argument("verify_ode: order " + std::to_string(N) + " below the required " + std::to_string(need));
  }
  for (const auto& s : series) {
    if (s.order() < N) throw std::invalid_argument("verify_ode: series truncated below the requested order");
  }
  OdeReport report;
  for (const auto& eq : system.equations) {
    EquationCheck check;
    check.vertex = eq.vertex;
    const BiSeries& y = series[static_cast<std::size_t>(eq.vertex)].truncated(N);
    const int through = N - eq.order;
    check.checked_through = through;
    const BiSeries lhs = y.derivative(eq.order);
    BiSeries rhs(through);
    for (const auto& t : eq.terms) {
      const BiSeries& yt = series[static_cast<std::size_t>(t.target)];
      rhs += yt.truncated(N).derivative(t.inner).times_monomial(t.degree).derivative(t.outer).truncated(through);
    }
    rhs = rhs.times_t_power(1);
    const BiSeries diff = lhs - rhs;
    int n = -1;
    int q = 0;
    first_nonzero(diff, through, n, q);
    if (n >= 0) {
      check.ok = false;
      check.mismatch = CoefficientMismatch{n, q, lhs.coeff(n, q), rhs.coeff(n, q)};
    }
    for (int k = 0; k < eq.order && check.boundary_ok; ++k) {
      const auto& row = eq.initial[static_cast<std::size_t>(k)];
      const int width = std::max(static_cast<int>(row.size()), static_cast<int>(y.slice(k).size()));
      for (int j = 0; j < width; ++j) {
        const mpz_class want = static_cast<std::size_t>(j) < row.size() ? row[static_cast<std::size_t>(j)] : 0;
        if (y.count(k, j) != want) {
          check.boundary_ok = false;
          check.ok = false;
          if (!check.mismatch) {
            check.mismatch = CoefficientMismatch{k, j, mpq_class(y.count(k, j)), mpq_class(want)};
          }
          break;
        }
      }
    }
    report.ok = report.ok && check.ok;
    report.equations.push_back(std::move(check));
  }
  return report;
}

std::vector<ScalarOde> golden_scalar_odes() {
  const auto T = [](long c, int tp, int xp, int a, int b, int i) { return ScalarOdeTerm{c, tp, xp, a, b, i}; };
  std::vector<ScalarOde> out;
  out.push_back(ScalarOde{"1576243,13254 stated",
                          {parse_permutation("1576243"), parse_permutation("13254")},
                          {T(6, 0, 3, 0, 0, 5), T(-18, 0, 2, 0, 0, 4), T(-6, 1, 3, 2, 4, 1), T(18, 1, 2, 1, 4, 1),
                           T(-6, 1, 3, 1, 1, 1), T(18, 1, 3, 0, 0, 1), T(-1, 1, 7, 0, 0, 1)}});
  out.push_back(ScalarOde{"12354,132465 stated",
                          {parse_permutation("12354"), parse_permutation("132465")},
                          {T(1, 0, 0, 0, 0, 9), T(-1, 1, 0, 5, 1, 1), T(-1, 1, 0, 0, 0, 6), T(-1, 1, 0, 4, 1, 1),
                           T(1, 2, 0, 3, 1, 1), T(-1, 2, 0, 2, 1, 1), T(1, 3, 0, 1, 1, 1), T(-1, 2, 0, 1, 1, 1)}});
  out.push_back(ScalarOde{"12354,132465 corrected",
                          {parse_permutation("12354"), parse_permutation("132465")},
                          {T(1, 0, 0, 0, 0, 9), T(-1, 1, 0, 5, 1, 1), T(-1, 1, 0, 4, 1, 1), T(-1, 1, 0, 0, 0, 6)}});
  return out;
}

ScalarOdeCheck verify_scalar_ode(std::span<const ScalarOdeTerm> terms, const BiSeries& y) {
  if (terms.empty()) throw std::invalid_argument("verify_scalar_ode: no terms");
  std::optional<BiSeries> residual;
  for (const auto& t : terms) {
    if (t.inner > y.order()) throw std::invalid_argument("verify_scalar_ode: series order too low");
    BiSeries term = y.derivative(t.inner).times_monomial(t.degree);
    if (t.outer > term.order()) throw std::invalid_argument("verify_scalar_ode: series order too low");
    term = term.derivative(t.outer).times_x_power(t.x_power).times_t_power(t.t_power) * t.coef;
    if (residual) {
      *residual += term;
    } else {
      residual = std::move(term);
    }
  }
  ScalarOdeCheck check;
  check.checked_through = residual->order();
  int n = -1;
  int q = 0;
  const mpq_class bad = first_nonzero(*residual, residual->order(), n, q);
  if (n >= 0) {
    check.ok = false;
    check.mismatch = CoefficientMismatch{n, q, bad, 0};
  }
  return check;
}

std::string ode_to_json(const OdeSystem& system) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : system.vertices) j["vertices"].push_back(to_string(v));
  j["equations"] = nlohmann::json::array();
  for (const auto& eq : system.equations) {
    nlohmann::ordered_json e;
    e["vertex"] = eq.vertex;
    e["order"] = eq.order;
    e["terms"] = nlohmann::json::array();
    for (const auto& t : eq.terms) {
      e["terms"].push_back(nlohmann::ordered_json{{"a", t.outer}, {"b", t.degree}, {"c", t.inner}, {"target", t.target}});
    }
    nlohmann::ordered_json init = nlohmann::json::array();
    for (const auto& row : eq.initial) {
      nlohmann::ordered_json r = nlohmann::json::array();
      for (const auto& x : row) r.push_back(x.get_str());
      init.push_back(r);
    }
    e["initial"] = init;
    j["equations"].push_back(e);
  }
  return j.dump(2);
}

std::string ode_to_text(const OdeSystem& system) {
  std::ostringstream os;
  for (const auto& eq : system.equations) {
    const std::string y = vertex_name(system.vertices.at(static_cast<std::size_t>(eq.vertex)));
    os << y << power_suffix(eq.order) << " = t*(";
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
      const auto& t = eq.terms[i];
      if (i > 0) os << " + ";
      os << render_term(t.outer, t.degree, t.inner, vertex_name(system.vertices.at(static_cast<std::size_t>(t.target))));
    }
    os << ")\n";
    os << "  initial " << y << ":";
    for (std::size_t n = 0; n < eq.initial.size(); ++n) {
      for (std::size_t q = 0; q < eq.initial[n].size(); ++q) {
        if (eq.initial[n][q] != 0) os << " cl(" << n << "," << q << ")=" << eq.initial[n][q].get_str();
      }
    }
    os << " (all others below x^" << eq.order << " zero)\n";
  }
  return os.str();
}

std::string scalar_ode_to_text(const ScalarOde& ode) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : ode.terms) {
    mpq_class c = t.coef;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    c = abs(c);
    if (c != 1) os << c.get_str() << "*";
    if (t.t_power == 1) os << "t*";
    if (t.t_power > 1) os << "t^" << t.t_power << "*";
    if (t.x_power == 1) os << "x*";
    if (t.x_power > 1) os << "x^" << t.x_power << "*";
    os << render_term(t.outer, t.degree, t.inner, "y");
  }
  os << " = 0";
  return os.str();
}

std::string report_to_text(const OdeSystem& system, const OdeReport& report) {
  std::ostringstream os;
  for (const auto& c : report.equations) {
    os << vertex_name(system.vertices.at(static_cast<std::size_t>(c.vertex))) << ": " << (c.ok ? "pass" : "FAIL")
       << " through x^" << c.checked_through;
    if (!c.boundary_ok) os << " (boundary data differs)";
    if (c.mismatch) {
      os << "; first mismatch at x^" << c.mismatch->n << " t^" << c.mismatch->q << ": " << c.mismatch->lhs.get_str()
         << " vs " << c.mismatch->rhs.get_str();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cpa
