#include "kgraph/model.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/linalg.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace kgraph {

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::No: return "no";
    case Tristate::Yes: return "yes";
    case Tristate::Unknown: return "unknown";
  }
  return "unknown";
}

unsigned Degree::total() const { return std::accumulate(coords_.begin(), coords_.end(), 0u); }

Degree operator+(const Degree& a, const Degree& b) {
  if (a.size() != b.size()) throw PreconditionViolated("degree length mismatch");
  Degree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.coords_[i] = a.coords_[i] + b.coords_[i];
  return out;
}

bool Degree::dominated_by(const Degree& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (coords_[i] > other.coords_[i]) return false;
  return true;
}

std::string to_string(const Degree& d) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d[i];
  out << ')';
  return out.str();
}

std::vector<Degree> degrees_up_to(std::size_t k, unsigned bound) {
  std::vector<Degree> out;
  Degree current(k);
  for (;;) {
    out.push_back(current);
    // Odometer with the last coordinate fastest gives lexicographic order.
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (current[i] < bound) {
        ++current[i];
        for (std::size_t j = i + 1; j < k; ++j) current[j] = 0;
        break;
      }
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

VertexSubset::VertexSubset(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSubset VertexSubset::all(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return VertexSubset(std::move(m));
}

bool VertexSubset::contains(std::size_t v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

KGraphPresentation::KGraphPresentation(std::vector<std::string> vertices, std::vector<IntMatrix> coordinate_matrices)
    : vertices_(std::move(vertices)), matrices_(std::move(coordinate_matrices)) {
  if (matrices_.empty()) throw MalformedInput("k must be positive (no coordinate matrices given)");
  if (vertices_.empty()) throw MalformedInput("vertex list is empty");
  std::set<std::string> seen;
  for (const auto& name : vertices_)
    if (!seen.insert(name).second) throw MalformedInput("duplicate vertex name '" + name + "'");
  const auto n = static_cast<Index>(vertices_.size());
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const IntMatrix& m = matrices_[i];
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream msg;
      msg << "matrix " << i << " has shape " << m.rows() << "x" << m.cols() << ", expected " << n << "x" << n;
      throw MalformedInput(msg.str());
    }
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c)
        if (m(r, c) < 0) {
          std::ostringstream msg;
          msg << "matrix " << i << " entry (" << r << "," << c << ") is negative";
          throw MalformedInput(msg.str());
        }
  }
}

std::size_t KGraphPresentation::vertex_index(const std::string& name) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) throw MalformedInput("unknown vertex '" + name + "'");
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool operator==(const KGraphPresentation& a, const KGraphPresentation& b) {
  if (a.vertices_ != b.vertices_ || a.matrices_.size() != b.matrices_.size()) return false;
  for (std::size_t i = 0; i < a.matrices_.size(); ++i)
    if (a.matrices_[i] != b.matrices_[i]) return false;
  return true;
}

std::vector<std::string> Validation::diagnostics(const KGraphPresentation& g) const {
  std::vector<std::string> out;
  for (auto [i, j] : non_commuting) {
    std::ostringstream msg;
    msg << "coordinate matrices " << i << " and " << j << " do not commute";
    out.push_back(msg.str());
  }
  for (auto [i, v] : sources) {
    std::ostringstream msg;
    msg << "vertex '" << g.vertex_name(v) << "' receives no edge of colour " << i << " (source)";
    out.push_back(msg.str());
  }
  return out;
}

Validation validate(const KGraphPresentation& g) {
  Validation out;
  for (std::size_t i = 0; i < g.k(); ++i)
    for (std::size_t j = i + 1; j < g.k(); ++j) {
      const IntMatrix ij = g.coordinate(i) * g.coordinate(j);
      const IntMatrix ji = g.coordinate(j) * g.coordinate(i);
      if (ij != ji) out.non_commuting.emplace_back(i, j);
    }
  for (std::size_t i = 0; i < g.k(); ++i)
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      bool nonzero = false;
      for (Index c = 0; c < g.coordinate(i).cols() && !nonzero; ++c)
        nonzero = g.coordinate(i)(static_cast<Index>(v), c) != 0;
      if (!nonzero) out.sources.emplace_back(i, v);
    }
  out.commuting = out.non_commuting.empty();
  out.no_sources = out.sources.empty();
  return out;
}

void require_valid(const KGraphPresentation& g) {
  const Validation v = validate(g);
  if (v.valid()) return;
  std::string msg = "presentation is not valid:";
  for (const auto& d : v.diagnostics(g)) msg += " " + d + ";";
  throw PreconditionViolated(msg);
}

IntMatrix degree_matrix_in_order(const KGraphPresentation& g, const Degree& n, const std::vector<std::size_t>& order) {
  if (n.size() != g.k()) throw PreconditionViolated("degree has length " + std::to_string(n.size()) + ", expected k = " + std::to_string(g.k()));
  const auto size = static_cast<Index>(g.vertex_count());
  IntMatrix result = IntMatrix::Identity(size, size);
  for (std::size_t i : order) result = result * matrix_power(g.coordinate(i), n[i]);
  return result;
}

IntMatrix degree_matrix(const KGraphPresentation& g, const Degree& n) {
  std::vector<std::size_t> order(g.k());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return degree_matrix_in_order(g, n, order);
}

SupportMatrix union_support(const KGraphPresentation& g) {
  const auto n = static_cast<Index>(g.vertex_count());
  SupportMatrix s = SupportMatrix::Zero(n, n);
  for (const auto& m : g.coordinates()) s = s.cwiseMax(support_of(m));
  return s;
}

SupportMatrix degree_support(const KGraphPresentation& g, const Degree& n) {
  const auto size = static_cast<Index>(g.vertex_count());
  SupportMatrix s = SupportMatrix::Identity(size, size);
  for (std::size_t i = 0; i < g.k(); ++i) {
    const SupportMatrix si = support_of(g.coordinate(i));
    for (unsigned t = 0; t < n[i]; ++t) s = support_product(s, si);
  }
  return s;
}

namespace {

void check_vertex(const KGraphPresentation& g, std::size_t v) {
  if (v >= g.vertex_count()) throw MalformedInput("unknown vertex index " + std::to_string(v));
}

// Forward closure along the union support from every seed.
std::vector<bool> reach_from(const SupportMatrix& support, const std::vector<std::size_t>& seeds) {
  const auto n = static_cast<std::size_t>(support.rows());
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t s : seeds)
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u = 0; u < n; ++u)
      if (!seen[u] && support(static_cast<Index>(v), static_cast<Index>(u))) {
        seen[u] = true;
        queue.push_back(u);
      }
  }
  return seen;
}

VertexSubset subset_of(const std::vector<bool>& mask) {
  std::vector<std::size_t> m;
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) m.push_back(v);
  return VertexSubset(std::move(m));
}

}  // namespace

VertexSubset union_reach(const KGraphPresentation& g, std::size_t v) {
  check_vertex(g, v);
  return subset_of(reach_from(union_support(g), {v}));
}

VertexSubset hereditary_closure(const KGraphPresentation& g, const VertexSubset& s) {
  for (std::size_t v : s.members()) check_vertex(g, v);
  return subset_of(reach_from(union_support(g), s.members()));
}

bool is_hereditary(const KGraphPresentation& g, const VertexSubset& s) {
  return hereditary_closure(g, s) == s;
}

VertexSubset saturated_hereditary_closure(const KGraphPresentation& g, const VertexSubset& s) {
  for (std::size_t v : s.members()) check_vertex(g, v);
  const SupportMatrix support = union_support(g);
  const std::size_t n = g.vertex_count();
  std::vector<bool> in = reach_from(support, s.members());

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::size_t> absorbed;
    for (std::size_t v = 0; v < n; ++v) {
      if (in[v]) continue;
      for (std::size_t i = 0; i < g.k(); ++i) {
        const IntMatrix& m = g.coordinate(i);
        bool inside = true;
        for (std::size_t u = 0; u < n && inside; ++u)
          if (m(static_cast<Index>(v), static_cast<Index>(u)) > 0 && !in[u]) inside = false;
        if (inside) {
          absorbed.push_back(v);
          break;
        }
      }
    }
    if (!absorbed.empty()) {
      grew = true;
      for (std::size_t v : absorbed) in[v] = true;
      std::vector<std::size_t> seeds;
      for (std::size_t v = 0; v < n; ++v)
        if (in[v]) seeds.push_back(v);
      in = reach_from(support, seeds);
    }
  }
  return subset_of(in);
}

Tristate cofinal_within_bound(const KGraphPresentation& g, unsigned bound) {
  const std::size_t n = g.vertex_count();
  const SupportMatrix support = union_support(g);
  std::vector<std::vector<bool>> reach(n);
  for (std::size_t v = 0; v < n; ++v) reach[v] = reach_from(support, {v});

  // Supports of A_m for every m <= (bound, ..., bound).
  std::vector<SupportMatrix> colour;
  for (std::size_t i = 0; i < g.k(); ++i) colour.push_back(support_of(g.coordinate(i)));
  const std::vector<Degree> degrees = degrees_up_to(g.k(), bound);
  std::vector<SupportMatrix> supports;
  supports.reserve(degrees.size());
  std::size_t radix = bound + 1;
  for (const Degree& d : degrees) {
    std::size_t last = g.k();
    for (std::size_t i = 0; i < g.k(); ++i)
      if (d[i] > 0) last = i;
    if (last == g.k()) {
      supports.push_back(SupportMatrix::Identity(static_cast<Index>(n), static_cast<Index>(n)));
      continue;
    }
    // Index of d - e_last in lexicographic mixed-radix order.
    std::size_t index = 0;
    for (std::size_t i = 0; i < g.k(); ++i) index = index * radix + (d[i] - (i == last ? 1u : 0u));
    supports.push_back(support_product(supports[index], colour[last]));
  }

  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) {
      bool found = false;
      for (const SupportMatrix& s : supports) {
        bool inside = true;
        for (std::size_t u = 0; u < n && inside; ++u)
          if (s(static_cast<Index>(w), static_cast<Index>(u)) && !reach[v][u]) inside = false;
        if (inside) {
          found = true;
          break;
        }
      }
      if (!found) return Tristate::Unknown;
    }
  return Tristate::Yes;
}

CofinalityResult is_cofinal(const KGraphPresentation& g, unsigned direct_bound) {
  require_valid(g);
  CofinalityResult out;
  out.direct_bound = direct_bound;
  out.cofinal = Tristate::Yes;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSubset closure = saturated_hereditary_closure(g, VertexSubset({v}));
    if (closure.size() != g.vertex_count()) {
      out.cofinal = Tristate::No;
      out.counterexample = std::move(closure);
      break;
    }
  }
  out.direct_confirmation = cofinal_within_bound(g, direct_bound);
  if (out.cofinal == Tristate::No && out.direct_confirmation == Tristate::Yes)
    throw InternalInconsistency("saturated-hereditary criterion says not cofinal, but the direct definition holds within bound " +
                                std::to_string(direct_bound));
  return out;
}

bool is_strongly_connected(const KGraphPresentation& g) {
  const SupportMatrix support = union_support(g);
  const std::size_t n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    const auto seen = reach_from(support, {v});
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

CycleWitness full_degree_cycle(const KGraphPresentation& g) {
  require_valid(g);
  const SupportMatrix step = degree_support(g, Degree::constant(g.k(), 1));
  const std::size_t n = g.vertex_count();
  std::vector<long> first_visit(n, -1);
  std::size_t v = 0;
  long t = 0;
  while (first_visit[v] < 0) {
    first_visit[v] = t++;
    std::size_t next = n;
    for (std::size_t u = 0; u < n; ++u)
      if (step(static_cast<Index>(v), static_cast<Index>(u))) {
        next = u;
        break;
      }
    if (next == n) throw InternalInconsistency("A_(1,...,1) has a zero row on a valid presentation");
    v = next;
  }
  const auto length = static_cast<unsigned>(t - first_visit[v]);
  return CycleWitness{v, Degree::constant(g.k(), length)};
}

KGraphPresentation restrict_to(const KGraphPresentation& g, const VertexSubset& h) {
  if (h.empty()) throw PreconditionViolated("restriction to the empty vertex set");
  for (std::size_t v : h.members()) check_vertex(g, v);
  for (std::size_t i = 0; i < g.k(); ++i)
    for (std::size_t v : h.members())
      for (std::size_t u = 0; u < g.vertex_count(); ++u)
        if (!h.contains(u) && g.coordinate(i)(static_cast<Index>(v), static_cast<Index>(u)) > 0)
          throw PreconditionViolated("subset is not hereditary: colour-" + std::to_string(i) + " edge from '" +
                                     g.vertex_name(u) + "' into '" + g.vertex_name(v) + "'");
  std::vector<std::string> names;
  for (std::size_t v : h.members()) names.push_back(g.vertex_name(v));
  const auto size = static_cast<Index>(h.size());
  std::vector<IntMatrix> mats;
  for (const auto& m : g.coordinates()) {
    IntMatrix sub(size, size);
    for (Index r = 0; r < size; ++r)
      for (Index c = 0; c < size; ++c)
        sub(r, c) = m(static_cast<Index>(h.members()[static_cast<std::size_t>(r)]),
                      static_cast<Index>(h.members()[static_cast<std::size_t>(c)]));
    mats.push_back(std::move(sub));
  }
  return KGraphPresentation(std::move(names), std::move(mats));
}

namespace {

Integer row_sum(const IntMatrix& m, std::size_t v) {
  Integer s = 0;
  for (Index c = 0; c < m.cols(); ++c) s += m(static_cast<Index>(v), c);
  return s;
}

// A directed cycle in the subgraph induced on `allowed`, if any.
std::vector<std::size_t> find_cycle(const SupportMatrix& support, const std::vector<bool>& allowed) {
  const std::size_t n = allowed.size();
  std::vector<int> colour(n, 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t root = 0; root < n; ++root) {
    if (!allowed[root] || colour[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == n) {
        colour[v] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t u = next++;
      if (!allowed[u] || !support(static_cast<Index>(v), static_cast<Index>(u))) continue;
      if (colour[u] == 1) {
        std::vector<std::size_t> cycle;
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          cycle.push_back(it->first);
          if (it->first == u) break;
        }
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (colour[u] == 0) {
        colour[u] = 1;
        stack.emplace_back(u, 0);
      }
    }
  }
  return {};
}

}  // namespace

AperiodicityResult aperiodicity(const KGraphPresentation& g) {
  require_valid(g);
  AperiodicityResult out;
  const std::size_t n = g.vertex_count();
  if (g.k() == 1) {
    out.method = "condition-L";
    std::vector<bool> single(n);
    for (std::size_t v = 0; v < n; ++v) single[v] = row_sum(g.coordinate(0), v) == 1;
    out.witness = find_cycle(union_support(g), single);
    out.aperiodic = out.witness.empty() ? Tristate::Yes : Tristate::No;
    return out;
  }
  out.method = "unique-infinite-path";
  std::vector<bool> thin(n, true);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t i = 0; i < g.k(); ++i)
      if (row_sum(g.coordinate(i), v) != 1) thin[v] = false;
  const SupportMatrix support = union_support(g);
  for (std::size_t v = 0; v < n; ++v) {
    if (!thin[v]) continue;
    const auto seen = reach_from(support, {v});
    bool all_thin = true;
    for (std::size_t u = 0; u < n; ++u)
      if (seen[u] && !thin[u]) all_thin = false;
    if (all_thin) {
      out.aperiodic = Tristate::No;
      out.witness = subset_of(seen).members();
      return out;
    }
  }
  out.aperiodic = Tristate::Unknown;
  return out;
}

SimplicityStatus simplicity_status(const KGraphPresentation& g, bool assume_aperiodic) {
  SimplicityStatus out;
  const CofinalityResult cof = is_cofinal(g);
  const AperiodicityResult ap = aperiodicity(g);
  out.provenance.push_back("cofinal: " + to_string(cof.cofinal) + " (checked)");
  out.provenance.push_back("aperiodic: " + to_string(ap.aperiodic) + " (checked via " + ap.method + ")");
  if (cof.cofinal == Tristate::No || ap.aperiodic == Tristate::No) {
    out.simple = Tristate::No;
  } else if (ap.aperiodic == Tristate::Yes) {
    out.simple = Tristate::Yes;
  } else if (assume_aperiodic) {
    out.simple = Tristate::Yes;
    out.assumed = true;
    out.provenance.push_back("aperiodic: yes (assumed by caller)");
  }
  return out;
}

StructuralReport structural_report(const KGraphPresentation& g, bool assume_aperiodic) {
  StructuralReport out;
  const Validation v = validate(g);
  out.commuting = v.commuting;
  out.no_sources = v.no_sources;
  if (!v.valid()) return out;
  out.cofinality = is_cofinal(g);
  out.strongly_connected = is_strongly_connected(g);
  out.full_degree_cycle = full_degree_cycle(g);
  out.aperiodicity = aperiodicity(g);
  out.simplicity = simplicity_status(g, assume_aperiodic);
  return out;
}

}  // namespace kgraph
