#pragma once

// Shared fixtures and independent test-side oracles. The oracles use plain
// long long arithmetic and std containers so they share no code with the
// engine beyond the presentation type.

#include "kgraph/fixtures.hpp"
#include "kgraph/model.hpp"
#include "kgraph/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using kgraph::IntMatrix;
using kgraph::Integer;
using kgraph::KGraphPresentation;

using Dense = std::vector<std::vector<long long>>;

inline IntMatrix matrix(std::initializer_list<std::initializer_list<long long>> rows) {
  IntMatrix m(static_cast<kgraph::Index>(rows.size()), static_cast<kgraph::Index>(rows.begin()->size()));
  kgraph::Index r = 0;
  for (const auto& row : rows) {
    kgraph::Index c = 0;
    for (long long x : row) m(r, c++) = x;
    ++r;
  }
  return m;
}

inline Dense dense(const IntMatrix& m) {
  Dense d(static_cast<std::size_t>(m.rows()), std::vector<long long>(static_cast<std::size_t>(m.cols())));
  for (kgraph::Index r = 0; r < m.rows(); ++r)
    for (kgraph::Index c = 0; c < m.cols(); ++c) d[r][c] = m(r, c).convert_to<long long>();
  return d;
}

inline Dense identity(std::size_t n) {
  Dense d(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<long long>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t t = 0; t < b.size(); ++t)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][t] * b[t][j];
  return c;
}

inline Dense transpose(const Dense& a) {
  Dense t(a[0].size(), std::vector<long long>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline std::vector<long long> apply(const Dense& a, const std::vector<long long>& x) {
  std::vector<long long> y(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

/// Naive A_n by repeated multiplication, colours taken in the given order.
inline Dense naive_degree_matrix(const KGraphPresentation& g, const std::vector<unsigned>& n,
                                 const std::vector<std::size_t>& order) {
  Dense out = identity(g.vertex_count());
  for (std::size_t i : order)
    for (unsigned e = 0; e < n[i]; ++e) out = multiply(out, dense(g.coordinate(i)));
  return out;
}

/// Vertices reachable from v along edges of any colour (v included).
inline std::set<std::size_t> naive_reach(const KGraphPresentation& g, std::size_t v) {
  std::set<std::size_t> seen{v};
  std::vector<std::size_t> stack{v};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t i = 0; i < g.k(); ++i)
      for (std::size_t w = 0; w < g.vertex_count(); ++w)
        if (g.coordinate(i)(static_cast<kgraph::Index>(u), static_cast<kgraph::Index>(w)) > 0 && seen.insert(w).second)
          stack.push_back(w);
  }
  return seen;
}

/// Saturated hereditary closure recomputed by brute force: repeatedly add
/// anything reachable and any vertex whose colour-i successors all lie in
/// the set for some i.
inline std::set<std::size_t> naive_saturated_closure(const KGraphPresentation& g, std::set<std::size_t> h) {
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t v : std::set<std::size_t>(h))
      for (std::size_t u : naive_reach(g, v)) grew |= h.insert(u).second;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (h.count(v)) continue;
      for (std::size_t i = 0; i < g.k(); ++i) {
        bool inside = true;
        for (std::size_t u = 0; u < g.vertex_count(); ++u)
          if (g.coordinate(i)(static_cast<kgraph::Index>(v), static_cast<kgraph::Index>(u)) > 0 && !h.count(u))
            inside = false;
        if (inside) {
          h.insert(v);
          grew = true;
          break;
        }
      }
    }
  }
  return h;
}

struct NamedGraph {
  std::string name;
  KGraphPresentation graph;
};

/// The named finite examples plus a few multi-vertex graphs.
inline std::vector<NamedGraph> fixture_corpus() {
  std::vector<NamedGraph> out;
  out.push_back({"o2", kgraph::o2_graph()});
  out.push_back({"circle1", kgraph::circle_graph()});
  out.push_back({"hereditary2", kgraph::hereditary_graph()});
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<unsigned> loops(k, 1);
    while (true) {
      std::string name = "torus(";
      for (std::size_t i = 0; i < k; ++i) name += (i ? "," : "") + std::to_string(loops[i]);
      out.push_back({name + ")", kgraph::torus_graph(loops)});
      std::size_t i = 0;
      while (i < k && loops[i] == 4) loops[i++] = 1;
      if (i == k) break;
      ++loops[i];
    }
  }
  for (std::size_t n = 1; n <= 6; ++n) out.push_back({"cycle(2," + std::to_string(n) + ")", kgraph::cycle_graph(2, n)});
  out.push_back({"cycle(1,3)", kgraph::cycle_graph(1, 3)});
  out.push_back({"cycle(3,4)", kgraph::cycle_graph(3, 4)});
  out.push_back({"full2", KGraphPresentation({"a", "b"}, {matrix({{1, 1}, {1, 1}})})});
  // Two commuting colours on a strongly connected pair.
  out.push_back({"swap-and-full", KGraphPresentation({"a", "b"}, {matrix({{0, 1}, {1, 0}}), matrix({{1, 1}, {1, 1}})})});
  // A vertex feeding a permutation cycle: cofinal but not strongly connected.
  out.push_back({"tail-into-cycle", KGraphPresentation({"t", "a", "b"}, {matrix({{0, 1, 0}, {0, 0, 1}, {0, 1, 0}})})});
  // An O2-vertex fed by a vertex with a single loop.
  out.push_back({"o2-over-loop", KGraphPresentation({"a", "b"}, {matrix({{2, 1}, {0, 1}})})});
  out.push_back({"two-circles", KGraphPresentation({"a", "b"}, {matrix({{1, 0}, {0, 1}})})});
  return out;
}

/// Random commuting families {p_1(N), ..., p_k(N)} for a random non-negative
/// N with entries <= 3 and no zero rows; each p_i has non-negative
/// coefficients and degree <= 2. A quarter of the bases are permutation
/// matrices and a third of the families use monomials, so stably finite
/// cases occur.
inline std::vector<NamedGraph> random_families(std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<NamedGraph> out;
  while (out.size() < count) {
    const auto n = static_cast<kgraph::Index>(uniform(1, 8));
    const std::size_t k = static_cast<std::size_t>(uniform(1, 3));
    IntMatrix base = IntMatrix::Zero(n, n);
    if (uniform(0, 3) == 0) {
      std::vector<kgraph::Index> perm(static_cast<std::size_t>(n));
      for (kgraph::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (kgraph::Index i = 0; i < n; ++i) base(i, perm[static_cast<std::size_t>(i)]) = 1;
    } else {
      const int sparsity = uniform(1, 4);
      for (kgraph::Index r = 0; r < n; ++r) {
        for (kgraph::Index c = 0; c < n; ++c) base(r, c) = uniform(0, 3 + sparsity) > 3 ? 0 : uniform(0, 3);
        if (base.row(r).isZero()) base(r, uniform(0, static_cast<int>(n) - 1)) = 1;
      }
    }
    const IntMatrix base2 = base * base;
    const bool monomials = uniform(0, 2) == 0;
    std::vector<IntMatrix> ms;
    for (std::size_t i = 0; i < k; ++i) {
      if (monomials) {
        ms.push_back(uniform(0, 1) ? base : base2);
        continue;
      }
      const int a0 = uniform(0, 1);
      int a1 = uniform(0, 2);
      const int a2 = uniform(0, 1);
      if (a1 == 0 && a2 == 0) a1 = 1;
      IntMatrix m = base * Integer(a1) + base2 * Integer(a2);
      m += IntMatrix::Identity(n, n) * Integer(a0);
      ms.push_back(std::move(m));
    }
    std::vector<std::string> names;
    for (kgraph::Index v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    out.push_back({"family#" + std::to_string(out.size()), KGraphPresentation(std::move(names), std::move(ms))});
  }
  return out;
}

/// Partition of the box computed by naive relation closure on a tiny box:
/// start from all Sim pairs, then close under transitivity and adding unit
/// vectors until nothing changes. Returns a class label per colex index.
inline std::vector<std::size_t> naive_partition(const KGraphPresentation& g, unsigned max_entry, unsigned max_degree) {
  const std::size_t n = g.vertex_count();
  std::size_t size = 1;
  for (std::size_t v = 0; v < n; ++v) size *= max_entry + 1;
  auto decode = [&](std::size_t idx) {
    std::vector<long long> x(n);
    for (std::size_t v = 0; v < n; ++v) {
      x[v] = static_cast<long long>(idx % (max_entry + 1));
      idx /= max_entry + 1;
    }
    return x;
  };
  auto encode = [&](const std::vector<long long>& x) {
    std::size_t idx = 0, r = 1;
    for (std::size_t v = 0; v < n; ++v) {
      idx += static_cast<std::size_t>(x[v]) * r;
      r *= max_entry + 1;
    }
    return idx;
  };
  std::vector<Dense> powers;
  std::vector<unsigned> deg(g.k(), 0);
  std::vector<std::size_t> order(g.k());
  for (std::size_t i = 0; i < g.k(); ++i) order[i] = i;
  while (true) {
    powers.push_back(transpose(naive_degree_matrix(g, deg, order)));
    std::size_t i = 0;
    while (i < g.k() && deg[i] == max_degree) deg[i++] = 0;
    if (i == g.k()) break;
    ++deg[i];
  }
  std::vector<std::vector<char>> rel(size, std::vector<char>(size, 0));
  for (std::size_t a = 0; a < size; ++a) {
    rel[a][a] = 1;
    std::set<std::vector<long long>> images;
    for (const Dense& p : powers) images.insert(testing::apply(p, decode(a)));
    for (std::size_t b = 0; b < size; ++b)
      for (const Dense& q : powers)
        if (images.count(testing::apply(q, decode(b)))) rel[a][b] = rel[b][a] = 1;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t t = 0; t < size; ++t)
      for (std::size_t a = 0; a < size; ++a)
        if (rel[a][t])
          for (std::size_t b = 0; b < size; ++b)
            if (rel[t][b] && !rel[a][b]) rel[a][b] = rel[b][a] = changed = 1;
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = 0; b < size; ++b) {
        if (!rel[a][b]) continue;
        const auto xa = decode(a), xb = decode(b);
        for (std::size_t v = 0; v < n; ++v) {
          if (xa[v] == max_entry || xb[v] == max_entry) continue;
          auto ya = xa, yb = xb;
          ++ya[v];
          ++yb[v];
          const std::size_t ia = encode(ya), ib = encode(yb);
          if (!rel[ia][ib]) rel[ia][ib] = rel[ib][ia] = changed = 1;
        }
      }
  }
  std::vector<std::size_t> label(size);
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      if (rel[a][b]) {
        label[a] = b;
        break;
      }
  return label;
}

/// Replays the chain joining a and b with naive arithmetic, recursing into
/// the base pair of every Add move. Depth is bounded because the base pair
/// of an Add move was merged strictly earlier.
inline bool replay_chain(const KGraphPresentation& g, const kgraph::ClassTable& table, std::size_t a, std::size_t b,
                         std::map<std::pair<std::size_t, std::size_t>, bool>& memo) {
  const auto key = std::minmax(a, b);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const auto chain = table.explain(a, b);
  bool ok = chain.has_value();
  std::size_t at = a;
  std::vector<std::size_t> order(g.k());
  for (std::size_t i = 0; i < g.k(); ++i) order[i] = i;
  auto vec = [&](std::size_t idx) {
    std::vector<long long> x;
    for (unsigned e : table.entries_at(idx)) x.push_back(e);
    return x;
  };
  for (std::size_t s = 0; ok && s < chain->size(); ++s) {
    const kgraph::Move& m = (*chain)[s];
    if (m.a != at) ok = false;
    if (!ok) break;
    if (m.kind == kgraph::MoveKind::Sim) {
      const Dense p = transpose(naive_degree_matrix(g, m.p.coords(), order));
      const Dense q = transpose(naive_degree_matrix(g, m.q.coords(), order));
      ok = testing::apply(p, vec(m.a)) == testing::apply(q, vec(m.b));
    } else {
      auto xa = vec(m.base_a), xb = vec(m.base_b);
      ++xa[m.vertex];
      ++xb[m.vertex];
      ok = xa == vec(m.a) && xb == vec(m.b) && replay_chain(g, table, m.base_a, m.base_b, memo);
    }
    at = m.b;
  }
  ok = ok && at == b;
  memo[key] = ok;
  return ok;
}

}  // namespace testing
