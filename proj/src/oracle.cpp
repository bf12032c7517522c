#include "kgraph/oracle.hpp"

#include "kgraph/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace kgraph {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Keeps the smaller root so labels stay canonical.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Transposed degree matrices A^t_p for every p <= (M,...,M), in lex order.
struct DegreeTable {
  std::vector<Degree> degrees;
  std::vector<IntMatrix> exact;
  std::vector<Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>> small;
  std::vector<bool> fits;
};

DegreeTable degree_table(const KGraphPresentation& g, unsigned max_degree) {
  DegreeTable t;
  t.degrees = degrees_up_to(g.k(), max_degree);
  const Integer limit = std::numeric_limits<std::int64_t>::max();
  for (const Degree& p : t.degrees) {
    IntMatrix m = degree_matrix(g, p).transpose();
    bool fits = true;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> s(m.rows(), m.cols());
    for (Index r = 0; r < m.rows() && fits; ++r)
      for (Index c = 0; c < m.cols(); ++c) {
        if (m(r, c) > limit) {
          fits = false;
          break;
        }
        s(r, c) = m(r, c).convert_to<std::int64_t>();
      }
    t.exact.push_back(std::move(m));
    t.small.push_back(std::move(s));
    t.fits.push_back(fits);
  }
  return t;
}

std::string key_of(const IntVector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    out += v(i).str();
    out += ',';
  }
  return out;
}

std::string key_of(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::int64_t x : v) {
    out += std::to_string(x);
    out += ',';
  }
  return out;
}

// A^t_p x in 64-bit arithmetic; false on overflow.
bool small_image(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m, const std::vector<unsigned>& x,
                 std::vector<std::int64_t>& out) {
  out.assign(static_cast<std::size_t>(m.rows()), 0);
  for (Index r = 0; r < m.rows(); ++r) {
    std::int64_t acc = 0;
    for (Index c = 0; c < m.cols(); ++c) {
      std::int64_t term = 0;
      if (__builtin_mul_overflow(m(r, c), static_cast<std::int64_t>(x[static_cast<std::size_t>(c)]), &term)) return false;
      if (__builtin_add_overflow(acc, term, &acc)) return false;
    }
    out[static_cast<std::size_t>(r)] = acc;
  }
  return true;
}

IntVector to_int_vector(const std::vector<unsigned>& x) {
  IntVector v(static_cast<Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Index>(i)) = x[i];
  return v;
}

IntVector unit(std::size_t n, std::size_t v) {
  IntVector e = IntVector::Zero(static_cast<Index>(n));
  e(static_cast<Index>(v)) = 1;
  return e;
}

}  // namespace

std::optional<std::uint64_t> box_size(std::size_t vertices, unsigned max_entry) {
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < vertices; ++i)
    if (__builtin_mul_overflow(size, static_cast<std::uint64_t>(max_entry) + 1, &size)) return std::nullopt;
  return size;
}

IntVector ClassTable::vector_at(std::size_t index) const { return to_int_vector(entries_at(index)); }

std::vector<unsigned> ClassTable::entries_at(std::size_t index) const {
  std::vector<unsigned> out(dimension_);
  const std::uint64_t base = box_.max_entry + 1;
  std::uint64_t rest = index;
  for (std::size_t v = 0; v < dimension_; ++v) {
    out[v] = static_cast<unsigned>(rest % base);
    rest /= base;
  }
  return out;
}

std::optional<std::size_t> ClassTable::index_of(const std::vector<unsigned>& f) const {
  if (f.size() != dimension_) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t v = 0; v < dimension_; ++v) {
    if (f[v] > box_.max_entry) return std::nullopt;
    index += f[v] * radix_[v];
  }
  return static_cast<std::size_t>(index);
}

std::optional<std::size_t> ClassTable::index_of(const IntVector& f) const {
  if (static_cast<std::size_t>(f.size()) != dimension_) return std::nullopt;
  std::vector<unsigned> entries(dimension_);
  for (std::size_t v = 0; v < dimension_; ++v) {
    const Integer& x = f(static_cast<Index>(v));
    if (x < 0 || x > box_.max_entry) return std::nullopt;
    entries[v] = x.convert_to<unsigned>();
  }
  return index_of(entries);
}

std::vector<std::vector<std::size_t>> ClassTable::classes() const {
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < class_of_.size(); ++i) by_label[class_of_[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(by_label.size());
  for (auto& [label, members] : by_label) out.push_back(std::move(members));
  return out;
}

std::optional<std::vector<Move>> ClassTable::explain(std::size_t a, std::size_t b) const {
  if (!equal(a, b)) return std::nullopt;
  if (a == b) return std::vector<Move>{};
  std::unordered_map<std::size_t, std::vector<std::size_t>> adjacent;
  for (std::size_t m = 0; m < moves_.size(); ++m) {
    adjacent[moves_[m].a].push_back(m);
    adjacent[moves_[m].b].push_back(m);
  }
  std::unordered_map<std::size_t, std::size_t> via;  // vertex -> move used to reach it
  std::queue<std::size_t> frontier;
  frontier.push(a);
  via[a] = moves_.size();
  while (!frontier.empty() && !via.count(b)) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t m : adjacent[u]) {
      const std::size_t w = moves_[m].a == u ? moves_[m].b : moves_[m].a;
      if (via.emplace(w, m).second) frontier.push(w);
    }
  }
  if (!via.count(b)) throw InternalInconsistency("merge forest does not connect two equal classes");
  std::vector<Move> chain;
  for (std::size_t at = b; at != a;) {
    Move m = moves_[via[at]];
    const std::size_t prev = m.a == at ? m.b : m.a;
    if (m.b != at) {  // orient the move prev -> at
      std::swap(m.a, m.b);
      std::swap(m.p, m.q);
      std::swap(m.base_a, m.base_b);
    }
    chain.push_back(std::move(m));
    at = prev;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

ClassTable build_class_table(const KGraphPresentation& g, const Box& box) {
  require_valid(g);
  if (box.max_entry < 1 || box.max_degree < 1) throw MalformedInput("box bounds must be at least 1");
  const std::size_t n = g.vertex_count();
  const auto total = box_size(n, box.max_entry);
  if (!total || *total > box.max_vectors)
    throw ResourceExhausted("box with N = " + std::to_string(box.max_entry) + " on " + std::to_string(n) +
                            " vertices exceeds the cap of " + std::to_string(box.max_vectors) + " vectors");

  ClassTable table;
  table.box_ = box;
  table.dimension_ = n;
  table.radix_.resize(n);
  for (std::size_t v = 0; v < n; ++v) table.radix_[v] = v == 0 ? 1 : table.radix_[v - 1] * (box.max_entry + 1);
  const auto size = static_cast<std::size_t>(*total);

  const DegreeTable degrees = degree_table(g, box.max_degree);
  const std::size_t degree_count = degrees.degrees.size();
  UnionFind uf(size);

  // Sim moves: every producer of an image is joined to its first producer.
  std::vector<std::uint64_t> first_in_box(size, kNone);
  std::unordered_map<std::string, std::uint64_t> first_outside;
  std::vector<unsigned> x(n, 0);
  std::vector<std::int64_t> image;
  for (std::size_t xi = 0; xi < size; ++xi) {
    if (xi > 0)  // colex increment
      for (std::size_t v = 0; v < n; ++v) {
        if (x[v] < box.max_entry) {
          ++x[v];
          break;
        }
        x[v] = 0;
      }
    for (std::size_t pi = 0; pi < degree_count; ++pi) {
      const std::uint64_t producer = static_cast<std::uint64_t>(xi) * degree_count + pi;
      std::uint64_t* slot = nullptr;
      if (degrees.fits[pi] && small_image(degrees.small[pi], x, image)) {
        const bool inside = std::all_of(image.begin(), image.end(),
                                        [&](std::int64_t e) { return e <= static_cast<std::int64_t>(box.max_entry); });
        if (inside) {
          std::uint64_t idx = 0;
          for (std::size_t v = 0; v < n; ++v) idx += static_cast<std::uint64_t>(image[v]) * table.radix_[v];
          slot = &first_in_box[static_cast<std::size_t>(idx)];
        } else {
          slot = &first_outside.try_emplace(key_of(image), kNone).first->second;
        }
      } else {
        const IntVector big = degrees.exact[pi] * to_int_vector(x);
        slot = &first_outside.try_emplace(key_of(big), kNone).first->second;
      }
      if (*slot == kNone) {
        *slot = producer;
        continue;
      }
      const auto yi = static_cast<std::size_t>(*slot / degree_count);
      const auto qi = static_cast<std::size_t>(*slot % degree_count);
      if (uf.unite(yi, xi)) {
        Move m;
        m.kind = MoveKind::Sim;
        m.a = yi;
        m.p = degrees.degrees[qi];
        m.b = xi;
        m.q = degrees.degrees[pi];
        table.moves_.push_back(std::move(m));
      }
    }
  }

  // Add moves with unit vectors, to a fixed point. Adding e_v repeatedly
  // reaches every z that keeps both sides inside the box.
  std::vector<std::size_t> first(size), stamp(size, 0);
  std::size_t round = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      ++round;
      const std::uint64_t step = table.radix_[v];
      for (std::size_t xi = 0; xi < size; ++xi) {
        if ((xi / step) % (box.max_entry + 1) == box.max_entry) continue;
        const std::size_t r = uf.find(xi);
        if (stamp[r] != round) {
          stamp[r] = round;
          first[r] = xi;
          continue;
        }
        const std::size_t a = first[r] + step;
        const std::size_t b = xi + step;
        if (uf.unite(a, b)) {
          Move m;
          m.kind = MoveKind::Add;
          m.a = a;
          m.b = b;
          m.vertex = v;
          m.base_a = first[r];
          m.base_b = xi;
          table.moves_.push_back(std::move(m));
          changed = true;
        }
      }
    }
  }

  table.class_of_.resize(size);
  for (std::size_t i = 0; i < size; ++i) table.class_of_[i] = uf.find(i);
  table.class_count_ = 0;
  for (std::size_t i = 0; i < size; ++i)
    if (table.class_of_[i] == i) ++table.class_count_;
  return table;
}

std::optional<SimWitness> sim_related(const KGraphPresentation& g, const IntVector& x, const IntVector& y,
                                      unsigned max_degree) {
  require_valid(g);
  const auto n = static_cast<Index>(g.vertex_count());
  if (x.size() != n || y.size() != n) throw MalformedInput("vector length does not match the vertex count");
  const std::vector<Degree> degrees = degrees_up_to(g.k(), max_degree);
  std::vector<IntVector> xs, ys;
  for (const Degree& p : degrees) {
    const IntMatrix mt = degree_matrix(g, p).transpose();
    xs.push_back(mt * x);
    ys.push_back(mt * y);
  }
  for (std::size_t p = 0; p < degrees.size(); ++p)
    for (std::size_t q = 0; q < degrees.size(); ++q)
      if (xs[p] == ys[q]) return SimWitness{degrees[p], degrees[q]};
  return std::nullopt;
}

ReplayResult replay_moves(const KGraphPresentation& g, const ClassTable& table) {
  ReplayResult out;
  std::map<Degree, IntMatrix> transposed;
  auto power = [&](const Degree& p) -> const IntMatrix& {
    auto it = transposed.find(p);
    if (it == transposed.end()) it = transposed.emplace(p, degree_matrix(g, p).transpose()).first;
    return it->second;
  };
  UnionFind uf(table.size());
  for (const Move& m : table.moves()) {
    const std::string where = "move " + std::to_string(out.moves_checked);
    if (m.kind == MoveKind::Sim) {
      for (const Degree* d : {&m.p, &m.q})
        for (unsigned c : d->coords())
          if (c > table.box().max_degree) {
            out.ok = false;
            out.failure = where + ": degree exceeds the search bound";
            return out;
          }
      if (power(m.p) * table.vector_at(m.a) != power(m.q) * table.vector_at(m.b)) {
        out.ok = false;
        out.failure = where + ": Sim identity A^t_p x = A^t_q y fails";
        return out;
      }
    } else {
      const IntVector e = unit(table.dimension(), m.vertex);
      if (table.vector_at(m.a) != table.vector_at(m.base_a) + e || table.vector_at(m.b) != table.vector_at(m.base_b) + e) {
        out.ok = false;
        out.failure = where + ": Add move does not add the same unit vector";
        return out;
      }
      if (uf.find(m.base_a) != uf.find(m.base_b)) {
        out.ok = false;
        out.failure = where + ": Add move uses a base pair not joined by earlier moves";
        return out;
      }
    }
    uf.unite(m.a, m.b);
    ++out.moves_checked;
  }
  for (std::size_t i = 0; i < table.size(); ++i)
    if (uf.find(i) != uf.find(table.class_of(i))) {
        out.ok = false;
      out.failure = "moves do not generate the table's partition at vector " + std::to_string(i);
      return out;
    }
  if (table.moves().size() + table.class_count() != table.size()) {
    out.ok = false;
    out.failure = "moves do not form a spanning forest of the partition";
  }
  return out;
}

std::optional<IntVector> approx_le(const ClassTable& table, const IntVector& x, const IntVector& y) {
  const auto xi = table.index_of(x);
  const auto yi = table.index_of(y);
  if (!xi || !yi) throw PreconditionViolated("approx_le needs both vectors inside the box");
  const std::vector<unsigned> xe = table.entries_at(*xi);
  const std::size_t n = table.dimension();
  std::vector<unsigned> room(n), extra(n, 0);
  for (std::size_t v = 0; v < n; ++v) room[v] = table.box().max_entry - xe[v];
  while (true) {
    std::vector<unsigned> sum(n);
    for (std::size_t v = 0; v < n; ++v) sum[v] = xe[v] + extra[v];
    if (table.equal(*table.index_of(sum), *yi)) return to_int_vector(extra);
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (extra[v] < room[v]) {
        ++extra[v];
        break;
      }
      extra[v] = 0;
    }
    if (v == n) return std::nullopt;
  }
}

std::optional<IntVector> detect_properly_infinite(const ClassTable& table, const IntVector& x) {
  if (x.isZero()) throw PreconditionViolated("proper infiniteness is probed on a nonzero vector");
  return approx_le(table, IntVector(x * Integer(2)), x);
}

ConicalAudit conical_audit(const ClassTable& table) {
  ConicalAudit out;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table.class_of(i) == table.class_of(0)) {
      out.passed = false;
      out.offending = i;
      break;
    }
  return out;
}

namespace {

bool is_refinement(const ClassTable& t, const Refinement& r, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const auto xy = t.index_of(IntVector(r.x + r.y));
  const auto zt = t.index_of(IntVector(r.z + r.t));
  const auto xz = t.index_of(IntVector(r.x + r.z));
  const auto yt = t.index_of(IntVector(r.y + r.t));
  for (const IntVector* v : {&r.x, &r.y, &r.z, &r.t})
    if (!t.index_of(*v)) return false;
  return xy && zt && xz && yt && t.equal(*xy, a) && t.equal(*zt, b) && t.equal(*xz, c) && t.equal(*yt, d);
}

// Refinement in N^n of an exact identity a + b = c + d.
Refinement exact_refinement(const IntVector& a, const IntVector& b, const IntVector& c) {
  Refinement r;
  r.x = a.cwiseMin(c);
  r.y = a - r.x;
  r.z = c - r.x;
  r.t = b - r.z;
  return r;
}

}  // namespace

std::optional<Refinement> refinement_search(const ClassTable& table, const IntVector& a, const IntVector& b,
                                            const IntVector& c, const IntVector& d, std::size_t budget) {
  const auto ai = table.index_of(a), bi = table.index_of(b), ci = table.index_of(c), di = table.index_of(d);
  const auto ab = table.index_of(IntVector(a + b)), cd = table.index_of(IntVector(c + d));
  if (!ai || !bi || !ci || !di || !ab || !cd) throw PreconditionViolated("refinement_search needs all sums inside the box");
  if (!table.equal(*ab, *cd)) throw PreconditionViolated("refinement_search needs a + b ~ c + d");

  if (a + b == c + d) return exact_refinement(a, b, c);

  // Replace each vector by a class member so the identity becomes exact.
  const auto all = table.classes();
  std::map<std::size_t, const std::vector<std::size_t>*> members;
  for (const auto& cls : all) members[table.class_of(cls.front())] = &cls;
  std::size_t steps = 0;
  for (std::size_t a2 : *members[table.class_of(*ai)])
    for (std::size_t b2 : *members[table.class_of(*bi)])
      for (std::size_t c2 : *members[table.class_of(*ci)]) {
        if (++steps > budget) return std::nullopt;
        const IntVector va = table.vector_at(a2), vb = table.vector_at(b2), vc = table.vector_at(c2);
        const IntVector vd = va + vb - vc;
        if ((vd.array() < 0).any()) continue;
        const auto d2 = table.index_of(vd);
        if (!d2 || !table.equal(*d2, *di)) continue;
        const Refinement r = exact_refinement(va, vb, vc);
        if (is_refinement(table, r, *ai, *bi, *ci, *di)) return r;
      }

  // Fall back to scanning x, y, z, t directly.
  for (std::size_t x = 0; x < table.size(); ++x)
    for (std::size_t y = 0; y < table.size(); ++y) {
      if (++steps > budget) return std::nullopt;
      const auto xy = table.index_of(IntVector(table.vector_at(x) + table.vector_at(y)));
      if (!xy || !table.equal(*xy, *ai)) continue;
      for (std::size_t z = 0; z < table.size(); ++z) {
        const auto xz = table.index_of(IntVector(table.vector_at(x) + table.vector_at(z)));
        if (!xz || !table.equal(*xz, *ci)) continue;
        for (std::size_t t = 0; t < table.size(); ++t) {
          if (++steps > budget) return std::nullopt;
          Refinement r{table.vector_at(x), table.vector_at(y), table.vector_at(z), table.vector_at(t)};
          if (is_refinement(table, r, *ai, *bi, *ci, *di)) return r;
        }
      }
    }
  return std::nullopt;
}

std::string to_string(CrossCheckStatus s) {
  switch (s) {
    case CrossCheckStatus::Consistent: return "consistent";
    case CrossCheckStatus::BoxTooSmall: return "box-too-small";
    case CrossCheckStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CrossCheckReport oracle_cross_check(const KGraphPresentation& g, const ClassTable& table) {
  if (is_cofinal(g).cofinal != Tristate::Yes) throw PreconditionViolated("oracle cross-check requires a cofinal graph");
  if (table.dimension() != g.vertex_count()) throw PreconditionViolated("table was built for another vertex count");
  const SemigroupVerdict sv = classify_semigroup(g);
  CrossCheckReport out;
  out.verdict = sv.verdict;
  out.class_count = table.class_count();

  const ConicalAudit conical = conical_audit(table);
  if (!conical.passed)
    throw InternalInconsistency("contradiction: nonzero vector " + std::to_string(*conical.offending) +
                                " is merged with 0");

  const std::size_t n = g.vertex_count();
  if (sv.verdict == SemigroupClass::PurelyInfinite) {
    if (table.box().max_entry < 2) {
      out.status = CrossCheckStatus::BoxTooSmall;
      out.notes.push_back("2 e_v lies outside the box");
      return out;
    }
    for (std::size_t v = 0; v < n; ++v)
      if (!detect_properly_infinite(table, unit(n, v))) {
        out.status = CrossCheckStatus::BoxTooSmall;
        out.notes.push_back("2 e_v <= e_v not found for vertex '" + g.vertex_name(v) + "'");
      }
    if (out.status == CrossCheckStatus::Consistent) out.notes.push_back("2 e_v <= e_v confirmed for every vertex");
    return out;
  }

  if (sv.verdict == SemigroupClass::StablyFinite) {
    // The trace is an additive invariant of the congruence, scaled to 1 on
    // the reduction where S(Λ) ≅ N is realised.
    const GraphTrace& tau = *sv.trace;
    const Rational scale = tau.values[sv.reduction->members().front()];
    std::vector<Rational> weight(n);
    for (std::size_t v = 0; v < n; ++v) weight[v] = tau.values[v] / scale;
    std::map<Rational, std::size_t> level_class;
    std::vector<Rational> level(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto e = table.entries_at(i);
      Rational beta = 0;
      for (std::size_t v = 0; v < n; ++v) beta += weight[v] * e[v];
      level[i] = beta;
    }
    for (std::size_t i = 0; i < table.size(); ++i)
      if (level[i] != level[table.class_of(i)])
        throw InternalInconsistency("contradiction: vectors " + std::to_string(i) + " and " +
                                    std::to_string(table.class_of(i)) + " are merged but have different trace values");
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto [it, fresh] = level_class.emplace(level[i], table.class_of(i));
      if (!fresh && it->second != table.class_of(i)) {
        out.status = CrossCheckStatus::Inconclusive;
        out.notes.push_back("trace level " + level[i].str() + " splits into several classes inside the box");
        return out;
      }
    }
    out.notes.push_back("classes are exactly the " + std::to_string(level_class.size()) + " trace levels");
    return out;
  }

  out.status = CrossCheckStatus::Inconclusive;
  out.notes.push_back("no closed-form verdict to compare");
  return out;
}

CrossCheckReport oracle_cross_check(const KGraphPresentation& g, const Box& box) {
  return oracle_cross_check(g, build_class_table(g, box));
}

}  // namespace kgraph
