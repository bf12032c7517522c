#include "kgraph/classify.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/linalg.hpp"
#include "kgraph/lp.hpp"

#include <sstream>

namespace kgraph {

namespace {

RatMatrix to_rational(const IntMatrix& m) { return m.cast<Rational>(); }

// Rows (I - M_1); (I - M_2); ...  Its kernel is the common fixed space.
RatMatrix stacked_fixed_point_system(const KGraphPresentation& g) {
  const auto n = static_cast<Index>(g.vertex_count());
  RatMatrix e(n * static_cast<Index>(g.k()), n);
  for (std::size_t i = 0; i < g.k(); ++i)
    e.block(static_cast<Index>(i) * n, 0, n, n) = RatMatrix::Identity(n, n) - to_rational(g.coordinate(i));
  return e;
}

// Columns (I - M_1^T) | (I - M_2^T) | ...  generate the lattice.
IntMatrix lattice_generators(const KGraphPresentation& g) {
  const auto n = static_cast<Index>(g.vertex_count());
  IntMatrix gen(n, n * static_cast<Index>(g.k()));
  for (std::size_t i = 0; i < g.k(); ++i)
    gen.block(0, static_cast<Index>(i) * n, n, n) = IntMatrix::Identity(n, n) - g.coordinate(i).transpose();
  return gen;
}

Integer content_of(const IntVector& v) {
  Integer g = 0;
  for (Index i = 0; i < v.size(); ++i) g = mp::gcd(g, v(i));
  return g;
}

}  // namespace

std::string trace_violation(const KGraphPresentation& g, const GraphTrace& t) {
  const auto n = g.vertex_count();
  if (t.values.size() != n) return "trace has " + std::to_string(t.values.size()) + " values for " + std::to_string(n) + " vertices";
  RatVector tau(static_cast<Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    if (t.values[v] <= 0) return "trace value at '" + g.vertex_name(v) + "' is not positive";
    tau(static_cast<Index>(v)) = t.values[v];
  }
  for (std::size_t i = 0; i < g.k(); ++i) {
    const RatVector image = to_rational(g.coordinate(i)) * tau;
    for (std::size_t v = 0; v < n; ++v)
      if (image(static_cast<Index>(v)) != tau(static_cast<Index>(v)))
        return "trace equation fails at '" + g.vertex_name(v) + "' for colour " + std::to_string(i);
  }
  return {};
}

std::string witness_violation(const KGraphPresentation& g, const LatticeWitness& w) {
  const auto n = static_cast<Index>(g.vertex_count());
  if (w.witness.size() != n) return "witness has the wrong length";
  if (w.combination.size() != g.k()) return "combination must have one vector per colour";
  bool nonzero = false;
  for (Index v = 0; v < n; ++v) {
    if (w.witness(v) < 0) return "witness has a negative entry";
    if (w.witness(v) != 0) nonzero = true;
  }
  if (!nonzero) return "witness is zero";
  IntVector sum = IntVector::Zero(n);
  for (std::size_t i = 0; i < g.k(); ++i) {
    if (w.combination[i].size() != n) return "combination vector has the wrong length";
    sum += w.combination[i] - g.coordinate(i).transpose() * w.combination[i];
  }
  if (sum != w.witness) return "sum_i (I - M_i^T) x_i does not equal the witness";
  return {};
}

InfiniteElement infinite_element(const KGraphPresentation& g, const LatticeWitness& w) {
  const auto n = static_cast<Index>(g.vertex_count());
  InfiniteElement out;
  out.element = IntVector::Zero(n);
  out.lhs = IntVector::Zero(n);
  out.rhs = w.witness;
  for (std::size_t i = 0; i < g.k(); ++i) {
    IntVector pos = IntVector::Zero(n), neg = IntVector::Zero(n);
    for (Index v = 0; v < n; ++v) {
      const Integer& x = w.combination[i](v);
      if (x > 0) pos(v) = x;
      if (x < 0) neg(v) = -x;
    }
    const IntMatrix mt = g.coordinate(i).transpose();
    out.element += pos + neg;
    out.lhs += pos + mt * neg;
    out.rhs += neg + mt * pos;
  }
  return out;
}

std::optional<GraphTrace> solve_graph_trace(const KGraphPresentation& g) {
  require_valid(g);
  // tau = 1 + y with y >= 0 and E tau = 0, i.e. E y = -E 1. The feasible
  // set is a cone, so tau >= 1 loses nothing against tau > 0.
  const RatMatrix e = stacked_fixed_point_system(g);
  const RatVector ones = RatVector::Ones(e.cols());
  const RatVector rhs = -(e * ones);
  const auto y = find_nonnegative_solution(e, rhs);
  if (!y) return std::nullopt;
  RatVector tau = *y + ones;
  const Rational scale = tau(0);
  GraphTrace t;
  for (Index v = 0; v < tau.size(); ++v) t.values.push_back(tau(v) / scale);
  return t;
}

std::optional<LatticeWitness> lattice_meets_positives(const KGraphPresentation& g) {
  require_valid(g);
  const auto n = static_cast<Index>(g.vertex_count());

  // W is the orthogonal complement of K = ker E, so x in W iff B^T x = 0
  // for a kernel basis B. Look for x in W, x >= 0, sum x = 1.
  const RatMatrix basis = kernel_basis(stacked_fixed_point_system(g));
  RatMatrix a(basis.cols() + 1, n);
  a.topRows(basis.cols()) = basis.transpose();
  a.bottomRows(1) = RatMatrix::Ones(1, n);
  RatVector b = RatVector::Zero(basis.cols() + 1);
  b(basis.cols()) = Rational(1);
  const auto x = find_nonnegative_solution(a, b);
  if (!x) return std::nullopt;

  // Clear denominators and strip the content to get a primitive integer
  // vector y in W.
  Integer denominators = 1;
  for (Index v = 0; v < n; ++v) denominators = lcm(denominators, denominator_of((*x)(v)));
  IntVector y(n);
  for (Index v = 0; v < n; ++v) y(v) = numerator_of((*x)(v) * Rational(denominators));
  y /= content_of(y);

  // Lift a multiple of y into the integer lattice: with P G Q = D, solve
  // D u = P y coordinatewise and set z = Q (m u).
  const IntMatrix gen = lattice_generators(g);
  const SmithForm<Integer> snf = smith_normal_form(gen);
  const IntVector py = snf.left * y;
  std::vector<Rational> u(static_cast<std::size_t>(gen.cols()), Rational(0));
  Integer multiplier = 1;
  for (Index r = 0; r < n; ++r) {
    if (r < snf.rank) {
      u[static_cast<std::size_t>(r)] = Rational(py(r)) / Rational(snf.diagonal(r, r));
      multiplier = lcm(multiplier, denominator_of(u[static_cast<std::size_t>(r)]));
    } else if (py(r) != 0) {
      throw InternalInconsistency("positive vector found by LP is not in the rational span of the lattice");
    }
  }
  IntVector scaled_u = IntVector::Zero(gen.cols());
  for (Index c = 0; c < gen.cols(); ++c)
    scaled_u(c) = numerator_of(u[static_cast<std::size_t>(c)] * Rational(multiplier));
  const IntVector z = snf.right * scaled_u;

  LatticeWitness w;
  w.witness = y * multiplier;
  for (std::size_t i = 0; i < g.k(); ++i) w.combination.push_back(z.segment(static_cast<Index>(i) * n, n));
  if (const std::string why = witness_violation(g, w); !why.empty())
    throw InternalInconsistency("recovered lattice combination fails re-verification: " + why);
  return w;
}

GordanAudit gordan_audit(const KGraphPresentation& g) {
  GordanAudit audit;
  audit.trace = solve_graph_trace(g);
  audit.witness = lattice_meets_positives(g);
  if (audit.trace.has_value() == audit.witness.has_value())
    throw InternalInconsistency(audit.trace ? "both a graph trace and a lattice witness exist"
                                            : "neither a graph trace nor a lattice witness exists");
  if (audit.trace) {
    if (const std::string why = trace_violation(g, *audit.trace); !why.empty())
      throw InternalInconsistency("graph trace fails re-verification: " + why);
  }
  return audit;
}

std::string to_string(SemigroupClass c) {
  switch (c) {
    case SemigroupClass::StablyFinite: return "stably-finite";
    case SemigroupClass::PurelyInfinite: return "purely-infinite";
    case SemigroupClass::NotStablyFinite: return "not-stably-finite";
    case SemigroupClass::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(CstarClass c) {
  switch (c) {
    case CstarClass::StablyFinite: return "stably-finite";
    case CstarClass::PurelyInfinite: return "purely-infinite";
    case CstarClass::NotStablyFinite: return "not-stably-finite";
    case CstarClass::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::string vector_text(const IntVector& v) {
  std::ostringstream out;
  out << '(';
  for (Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
  out << ')';
  return out.str();
}

std::string subset_text(const KGraphPresentation& g, const VertexSubset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + g.vertex_name(s.members()[i]);
  return out + "}";
}

}  // namespace

SemigroupVerdict classify_semigroup(const KGraphPresentation& g) {
  require_valid(g);
  SemigroupVerdict out;
  const CofinalityResult cof = is_cofinal(g);
  const GordanAudit audit = gordan_audit(g);

  if (cof.cofinal != Tristate::Yes) {
    if (audit.witness) {
      const InfiniteElement inf = infinite_element(g, *audit.witness);
      out.verdict = SemigroupClass::NotStablyFinite;
      out.witness = audit.witness;
      out.rules.push_back({"infinite-element-from-lattice",
                           {"lattice witness f = " + vector_text(audit.witness->witness) + " verified",
                            "[e] + [f] = [e] for e = " + vector_text(inf.element),
                            "cofinality fails (counterexample " + subset_text(g, *cof.counterexample) +
                                "), so pure infiniteness is not claimed"}});
    } else {
      out.trace = audit.trace;
      out.rules.push_back({"no-rule-applies",
                           {"cofinality fails (counterexample " + subset_text(g, *cof.counterexample) + ")",
                            "a faithful graph trace exists, but stable finiteness is only decided for cofinal graphs"}});
    }
    return out;
  }

  const CycleWitness cycle = full_degree_cycle(g);
  const VertexSubset h = hereditary_closure(g, VertexSubset({cycle.vertex}));
  const KGraphPresentation reduced = restrict_to(g, h);
  if (!is_strongly_connected(reduced))
    throw InternalInconsistency("reduction below a full-degree cycle is not strongly connected");
  out.reduction = h;
  out.rules.push_back({"strongly-connected-reduction",
                       {"cofinal (checked)",
                        "cycle at '" + g.vertex_name(cycle.vertex) + "' of degree " + to_string(cycle.degree),
                        "H = " + subset_text(g, h) + " is hereditary and H Λ is strongly connected"}});

  // Look for a vertex receiving more than one edge of some colour in H Λ.
  std::optional<std::pair<std::size_t, std::size_t>> branching;
  Integer branching_count = 0;
  for (std::size_t i = 0; i < reduced.k() && !branching; ++i)
    for (Index v = 0; v < reduced.coordinate(i).rows(); ++v) {
      const Integer s = reduced.coordinate(i).row(v).sum();
      if (s != 1) {
        branching = std::make_pair(i, static_cast<std::size_t>(v));
        branching_count = s;
        break;
      }
    }

  if (!branching) {
    out.verdict = SemigroupClass::StablyFinite;
    out.isomorphic_to_naturals = true;
    out.rules.push_back({"permutation-reduction",
                         {"every vertex of H Λ receives exactly one edge of each colour",
                          "classes are the l1-norm levels, so S(Λ) is isomorphic to N"}});
  } else {
    out.verdict = SemigroupClass::PurelyInfinite;
    out.rules.push_back({"branching-reduction",
                         {"vertex '" + reduced.vertex_name(branching->second) + "' receives " + branching_count.str() +
                          " edges of colour " + std::to_string(branching->first) + " in H Λ",
                          "2x <= x for every x"}});
  }

  const bool trace_exists = audit.trace.has_value();
  if (trace_exists != (out.verdict == SemigroupClass::StablyFinite))
    throw InternalInconsistency("strongly connected reduction disagrees with the trace/lattice certificate");
  out.trace = audit.trace;
  out.witness = audit.witness;
  out.rules.push_back({"trace-state-equivalence",
                       {trace_exists ? "faithful graph trace found and verified"
                                     : "nonzero non-negative lattice witness found and verified"}});
  return out;
}

namespace {

struct Proportionality {
  bool holds = true;
  bool all_one = true;
  std::string witness;
};

// Compares row (or column) u of a against the same line of b; both must be
// positive multiples of each other. Zero lines match only zero lines.
bool proportional(const IntMatrix& a, const IntMatrix& b, Index line, bool by_row, Rational& ratio) {
  const Index len = by_row ? a.cols() : a.rows();
  auto at = [&](const IntMatrix& m, Index t) -> const Integer& { return by_row ? m(line, t) : m(t, line); };
  std::optional<Rational> r;
  for (Index t = 0; t < len; ++t) {
    const Integer& x = at(a, t);
    const Integer& y = at(b, t);
    if ((x == 0) != (y == 0)) return false;
    if (x == 0) continue;
    const Rational q = Rational(x) / Rational(y);
    if (r && *r != q) return false;
    r = q;
  }
  ratio = r.value_or(Rational(1));
  return true;
}

}  // namespace

SemigroupVerdict classify_ray(const RayPresentation& r) {
  const RayValidation rv = validate_ray(r);
  if (!rv.valid()) {
    std::string msg = "ray presentation is not valid:";
    for (const auto& d : rv.diagnostics()) msg += " " + d + ";";
    throw PreconditionViolated(msg);
  }
  SemigroupVerdict out;
  if (rv.cofinal != Tristate::Yes) {
    out.rules.push_back({"no-rule-applies", {"cofinality not established (some block entry is zero)"}});
    return out;
  }

  bool all_equal = true;
  for (std::size_t l = 0; l < r.window(); ++l)
    for (std::size_t i = 1; i < r.k(); ++i)
      if (r.block(i, l) != r.block(0, l)) all_equal = false;
  if (all_equal) {
    out.verdict = SemigroupClass::StablyFinite;
    out.rules.push_back({"graded-equal-counts",
                         {"cofinal (all block entries positive)", "level function from the grading",
                          "|w Λ^{e_i} v| = |w Λ^{e_j} v| for all colours and vertices"}});
    return out;
  }

  Proportionality p;
  for (std::size_t i = 0; i < r.k() && p.holds; ++i)
    for (std::size_t j = i + 1; j < r.k() && p.holds; ++j)
      for (std::size_t l = 0; l < r.window() && p.holds; ++l) {
        const IntMatrix& bi = r.block(i, l);
        const IntMatrix& bj = r.block(j, l);
        for (Index w = 0; w < bi.rows() && p.holds; ++w) {
          Rational ratio;
          if (!proportional(bi, bj, w, true, ratio)) {
            p.holds = false;
          } else if (ratio != 1 && p.all_one) {
            p.all_one = false;
            std::ostringstream msg;
            msg << "vertex " << w << " of level " << l << ": colour " << i << " counts = " << ratio << " x colour " << j
                << " counts";
            p.witness = msg.str();
          }
        }
        for (Index w = 0; w < bi.cols() && p.holds; ++w) {
          Rational ratio;
          if (!proportional(bi, bj, w, false, ratio)) p.holds = false;
        }
      }

  if (p.holds && !p.all_one) {
    out.verdict = SemigroupClass::PurelyInfinite;
    out.rules.push_back({"graded-proportional-counts",
                         {"cofinal (all block entries positive)", "level function from the grading",
                          "rows and columns of colour blocks are positive multiples of each other", p.witness}});
    return out;
  }
  out.rules.push_back({"no-rule-applies", {"colour blocks are neither equal nor row/column proportional"}});
  return out;
}

CstarVerdict classify_cstar(const KGraphPresentation& g, bool assume_aperiodic) {
  require_valid(g);
  CstarVerdict out;
  const CofinalityResult cof = is_cofinal(g);
  const SimplicityStatus simplicity = simplicity_status(g, assume_aperiodic);
  const SemigroupVerdict semigroup = classify_semigroup(g);

  if (cof.cofinal != Tristate::Yes) {
    out.verdict = CstarClass::Unknown;
    out.missing.push_back("cofinality (fails; counterexample saturated hereditary set exists)");
    return out;
  }
  out.assumptions.push_back("cofinal (checked)");

  const bool trace_exists = semigroup.trace.has_value();
  if (trace_exists) {
    out.verdict = CstarClass::StablyFinite;
    out.rule = "cofinal-trace-criterion";
    out.quasidiagonal = true;
    out.assumptions.push_back("faithful graph trace exists (verified)");
  } else if (simplicity.simple == Tristate::Yes) {
    out.verdict = CstarClass::PurelyInfinite;
    out.rule = simplicity.assumed ? "simple-pure-infiniteness" : "unital-simple-pure-infiniteness";
    out.assumptions.push_back(simplicity.assumed ? "simple (aperiodicity assumed by caller)" : "simple (checked)");
    out.assumptions.push_back("finite vertex set: the algebra is unital and every hereditary set is finite");
    out.assumptions.push_back("S(Λ) unperforated (strongly connected reduction)");
    out.assumptions.push_back("lattice meets the positive cone (witness verified)");
  } else {
    out.verdict = CstarClass::NotStablyFinite;
    out.rule = "cofinal-trace-criterion";
    out.assumptions.push_back("lattice meets the positive cone (witness verified)");
    out.missing.push_back(simplicity.simple == Tristate::No ? "simplicity (fails)" : "simplicity (aperiodicity undetermined)");
  }

  // The semigroup verdict transfers to the algebra when it is simple.
  if (simplicity.simple == Tristate::Yes) {
    const bool sf_mismatch = semigroup.verdict == SemigroupClass::StablyFinite && out.verdict != CstarClass::StablyFinite;
    const bool pi_mismatch = semigroup.verdict == SemigroupClass::PurelyInfinite && out.verdict != CstarClass::PurelyInfinite;
    if (sf_mismatch || pi_mismatch)
      throw InternalInconsistency("algebra verdict contradicts the semigroup verdict on a simple graph");
    out.assumptions.push_back("semigroup-to-algebra-transfer consistent");
  }
  return out;
}

StateEvaluation state_from_trace(const GraphTrace& t, const IntVector& f) {
  if (static_cast<std::size_t>(f.size()) != t.values.size())
    throw MalformedInput("vertex mismatch: vector has " + std::to_string(f.size()) + " entries, trace has " +
                         std::to_string(t.values.size()));
  StateEvaluation out{Rational(0), t};
  for (Index v = 0; v < f.size(); ++v) out.value += Rational(f(v)) * t.values[static_cast<std::size_t>(v)];
  return out;
}

}  // namespace kgraph
