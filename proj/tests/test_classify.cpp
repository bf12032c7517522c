#include <doctest.h>

#include "kgraph/classify.hpp"
#include "kgraph/errors.hpp"
#include "support.hpp"

using namespace kgraph;
using testing::matrix;

namespace {

IntVector vec(std::initializer_list<long long> xs) {
  IntVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (long long x : xs) v(i++) = x;
  return v;
}

// Certificate checks written against the naive long long oracle rather than
// the engine's own verifiers.
bool naive_trace_ok(const KGraphPresentation& g, const GraphTrace& t) {
  // Scale to integers first.
  Integer common = 1;
  for (const auto& q : t.values) common = lcm(common, denominator_of(q));
  std::vector<long long> tau;
  for (const auto& q : t.values) {
    if (q <= 0) return false;
    tau.push_back(numerator_of(q * Rational(common)).convert_to<long long>());
  }
  for (std::size_t i = 0; i < g.k(); ++i)
    if (testing::apply(testing::dense(g.coordinate(i)), tau) != tau) return false;
  return true;
}

bool naive_witness_ok(const KGraphPresentation& g, const LatticeWitness& w) {
  const std::size_t n = g.vertex_count();
  std::vector<long long> sum(n, 0);
  bool nonzero = false;
  for (std::size_t i = 0; i < g.k(); ++i) {
    std::vector<long long> x;
    for (Index v = 0; v < w.combination[i].size(); ++v) x.push_back(w.combination[i](v).convert_to<long long>());
    const auto mx = testing::apply(testing::transpose(testing::dense(g.coordinate(i))), x);
    for (std::size_t v = 0; v < n; ++v) sum[v] += x[v] - mx[v];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (w.witness(static_cast<Index>(v)) < 0 || w.witness(static_cast<Index>(v)) != sum[v]) return false;
    nonzero |= sum[v] != 0;
  }
  return nonzero;
}

}  // namespace

TEST_CASE("graph trace solver") {
  const auto cycle = solve_graph_trace(cycle_graph(2, 3));
  REQUIRE(cycle);
  CHECK(cycle->values == std::vector<Rational>(3, Rational(1)));
  CHECK_FALSE(solve_graph_trace(o2_graph()));
  CHECK_FALSE(solve_graph_trace(hereditary_graph()));

  // A tail above a cycle carries the sum of what it sees.
  const KGraphPresentation tail({"t", "a", "b"}, {matrix({{0, 2, 0}, {0, 0, 1}, {0, 1, 0}})});
  const auto t = solve_graph_trace(tail);
  REQUIRE(t);
  CHECK(t->values == std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 2)});
  CHECK(trace_violation(tail, *t).empty());
}

TEST_CASE("trace and witness verifiers reject tampering") {
  const KGraphPresentation cycle = cycle_graph(2, 3);
  CHECK(trace_violation(cycle, GraphTrace{{1, 1, 1}}).empty());
  CHECK_FALSE(trace_violation(cycle, GraphTrace{{1, 2, 1}}).empty());
  CHECK_FALSE(trace_violation(cycle, GraphTrace{{0, 0, 0}}).empty());
  CHECK_FALSE(trace_violation(cycle, GraphTrace{{1, 1}}).empty());

  const KGraphPresentation o2 = o2_graph();
  CHECK(witness_violation(o2, LatticeWitness{vec({1}), {vec({-1})}}).empty());
  CHECK_FALSE(witness_violation(o2, LatticeWitness{vec({2}), {vec({-1})}}).empty());
  CHECK_FALSE(witness_violation(o2, LatticeWitness{vec({0}), {vec({0})}}).empty());
  CHECK_FALSE(witness_violation(o2, LatticeWitness{vec({-1}), {vec({1})}}).empty());
}

TEST_CASE("lattice witnesses") {
  const auto o2 = lattice_meets_positives(o2_graph());
  REQUIRE(o2);
  CHECK(o2->witness == vec({1}));
  CHECK(o2->combination[0] == vec({-1}));

  const auto torus = lattice_meets_positives(torus_graph({2, 3}));
  REQUIRE(torus);
  CHECK(torus->witness == vec({1}));
  CHECK(witness_violation(torus_graph({2, 3}), *torus).empty());

  CHECK_FALSE(lattice_meets_positives(cycle_graph(2, 3)));

  const auto h = lattice_meets_positives(hereditary_graph());
  REQUIRE(h);
  CHECK(h->witness == vec({0, 1}));

  // gcd(3 - 1, 5 - 1) = 2 so the lattice image is 2Z.
  const auto even = lattice_meets_positives(torus_graph({3, 5}));
  REQUIRE(even);
  CHECK(even->witness == vec({2}));
}

TEST_CASE("infinite element identity") {
  const KGraphPresentation g = hereditary_graph();
  const LatticeWitness w = *lattice_meets_positives(g);
  const InfiniteElement e = infinite_element(g, w);
  CHECK(e.lhs == e.rhs);
  CHECK_FALSE(e.element.isZero());
}

TEST_CASE("gordan alternative on the corpus and random families") {
  auto corpus = testing::fixture_corpus();
  for (auto& f : testing::random_families(120, 41)) corpus.push_back(f);
  for (const auto& [name, g] : corpus) {
    const GordanAudit audit = gordan_audit(g);
    CHECK_MESSAGE(audit.trace.has_value() != audit.witness.has_value(), name);
    if (audit.trace) CHECK_MESSAGE(naive_trace_ok(g, *audit.trace), name);
    if (audit.witness) CHECK_MESSAGE(naive_witness_ok(g, *audit.witness), name);
  }
  CHECK(gordan_audit(cycle_graph(2, 3)).trace_side());
  CHECK_FALSE(gordan_audit(o2_graph()).trace_side());
  CHECK_FALSE(gordan_audit(hereditary_graph()).trace_side());
}

TEST_CASE("semigroup classification of the named examples") {
  const SemigroupVerdict o2 = classify_semigroup(o2_graph());
  CHECK(o2.verdict == SemigroupClass::PurelyInfinite);
  CHECK(o2.witness);

  const SemigroupVerdict cycle = classify_semigroup(cycle_graph(2, 3));
  CHECK(cycle.verdict == SemigroupClass::StablyFinite);
  CHECK(cycle.isomorphic_to_naturals);
  CHECK(cycle.trace);

  CHECK(classify_semigroup(torus_graph({2, 3})).verdict == SemigroupClass::PurelyInfinite);
  CHECK(classify_semigroup(torus_graph({1, 1, 1})).verdict == SemigroupClass::StablyFinite);

  const SemigroupVerdict h = classify_semigroup(hereditary_graph());
  CHECK(h.verdict == SemigroupClass::NotStablyFinite);
  CHECK(h.rules.front().rule == "infinite-element-from-lattice");

  CHECK(classify_semigroup(testing::fixture_corpus().back().graph).verdict == SemigroupClass::Unknown);
}

TEST_CASE("decider agreement and hereditary invariance") {
  auto corpus = testing::fixture_corpus();
  for (auto& f : testing::random_families(120, 43)) corpus.push_back(f);
  for (const auto& [name, g] : corpus) {
    if (is_cofinal(g).cofinal != Tristate::Yes) continue;
    const SemigroupVerdict s = classify_semigroup(g);
    const bool traced = solve_graph_trace(g).has_value();
    CHECK_MESSAGE((s.verdict == SemigroupClass::StablyFinite) == traced, name);
    CHECK_MESSAGE((s.verdict == SemigroupClass::PurelyInfinite) == !traced, name);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const KGraphPresentation r = restrict_to(g, hereditary_closure(g, VertexSubset({v})));
      CHECK_MESSAGE(classify_semigroup(r).verdict == s.verdict, name);
    }
  }
}

TEST_CASE("C* classification") {
  const CstarVerdict o2 = classify_cstar(o2_graph(), false);
  CHECK(o2.verdict == CstarClass::PurelyInfinite);
  CHECK(o2.rule == "unital-simple-pure-infiniteness");
  CHECK(o2.twist_note == kTwistNote);

  const CstarVerdict cycle = classify_cstar(cycle_graph(2, 3), false);
  CHECK(cycle.verdict == CstarClass::StablyFinite);
  CHECK(cycle.rule == "cofinal-trace-criterion");
  CHECK(cycle.quasidiagonal);
  CHECK(simplicity_status(cycle_graph(2, 3), false).simple == Tristate::No);

  const CstarVerdict torus = classify_cstar(torus_graph({2, 3}), true);
  CHECK(torus.verdict == CstarClass::PurelyInfinite);
  CHECK(torus.rule == "simple-pure-infiniteness");

  const CstarVerdict unresolved = classify_cstar(torus_graph({2, 3}), false);
  CHECK(unresolved.verdict == CstarClass::NotStablyFinite);
  CHECK_FALSE(unresolved.missing.empty());

  const CstarVerdict h = classify_cstar(hereditary_graph(), false);
  CHECK(h.verdict == CstarClass::Unknown);
  CHECK_FALSE(h.missing.empty());
}

TEST_CASE("C* verdicts are deterministic and respect the semigroup verdict") {
  auto corpus = testing::fixture_corpus();
  for (auto& f : testing::random_families(60, 47)) corpus.push_back(f);
  for (const auto& [name, g] : corpus)
    for (bool assume : {false, true}) {
      const CstarVerdict a = classify_cstar(g, assume), b = classify_cstar(g, assume);
      CHECK(a.verdict == b.verdict);
      CHECK(a.rule == b.rule);
      const SemigroupVerdict s = classify_semigroup(g);
      if (s.verdict == SemigroupClass::StablyFinite) CHECK_MESSAGE(a.verdict == CstarClass::StablyFinite, name);
      if (simplicity_status(g, assume).simple == Tristate::Yes && s.verdict == SemigroupClass::PurelyInfinite)
        CHECK_MESSAGE(a.verdict == CstarClass::PurelyInfinite, name);
    }
}

TEST_CASE("states from traces") {
  const GraphTrace tau{{1, 1, 1}};
  CHECK(state_from_trace(tau, vec({1, 0, 1})).value == 2);
  CHECK(state_from_trace(tau, vec({0, 0, 0})).value == 0);
  CHECK_THROWS_AS(state_from_trace(tau, vec({1, 1})), MalformedInput);

  // Invariance on a ~-pair: A^t_(1,0) e_0 and e_0 have the same state.
  const KGraphPresentation cycle = cycle_graph(2, 3);
  const IntVector moved = cycle.coordinate(0).transpose() * vec({1, 0, 0});
  CHECK(state_from_trace(tau, moved).value == 1);

  // Additivity and invariance on random ~-pairs of traced families.
  for (const auto& [name, g] : testing::random_families(80, 53)) {
    const auto t = solve_graph_trace(g);
    if (!t) continue;
    const auto n = static_cast<Index>(g.vertex_count());
    IntVector f = IntVector::Zero(n), h = IntVector::Zero(n);
    for (Index v = 0; v < n; ++v) {
      f(v) = v % 3;
      h(v) = (v + 1) % 2;
    }
    CHECK(state_from_trace(*t, IntVector(f + h)).value ==
          state_from_trace(*t, f).value + state_from_trace(*t, h).value);
    for (std::size_t i = 0; i < g.k(); ++i)
      CHECK_MESSAGE(state_from_trace(*t, IntVector(g.coordinate(i).transpose() * f)).value ==
                        state_from_trace(*t, f).value,
                    name);
  }
}
