#pragma once

// Exact deciders for stable finiteness and pure infiniteness.
//
// Two certificates exist and, on every valid presentation, exactly one of
// them does:
//   * a faithful graph trace: tau > 0 with tau = M_i tau for every colour;
//   * a lattice witness: nonzero f >= 0 with f = sum_i (I - M_i^T) x_i over
//     the integers.
// The first lives in the common kernel K of the (I - M_i); the second in the
// column span W of the (I - M_i^T), and W is exactly the orthogonal
// complement of K. Both are found by exact LP feasibility.

#include "kgraph/model.hpp"
#include "kgraph/ray.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgraph {

struct GraphTrace {
  std::vector<Rational> values;
};

/// Empty string when the trace is strictly positive and fixed by every
/// coordinate matrix; otherwise the first violation found.
std::string trace_violation(const KGraphPresentation& g, const GraphTrace& t);

struct LatticeWitness {
  IntVector witness;
  /// One integer vertex vector per colour, sum_i (I - M_i^T) x_i = witness.
  std::vector<IntVector> combination;
};

std::string witness_violation(const KGraphPresentation& g, const LatticeWitness& w);

/// Split x_i = p_i - q_i into non-negative parts. Then
///   lhs = sum p_i + sum M_i^T q_i  equals  rhs = witness + sum q_i + sum M_i^T p_i,
/// lhs is congruent to e = sum (p_i + q_i) and rhs to e + witness, so e is
/// a nonzero infinite element of S(Λ).
struct InfiniteElement {
  IntVector element;
  IntVector lhs;  // sum_i p_i + sum_i M_i^T q_i
  IntVector rhs;  // witness + sum_i q_i + sum_i M_i^T p_i
};

InfiniteElement infinite_element(const KGraphPresentation& g, const LatticeWitness& w);

std::optional<GraphTrace> solve_graph_trace(const KGraphPresentation& g);
std::optional<LatticeWitness> lattice_meets_positives(const KGraphPresentation& g);

struct GordanAudit {
  std::optional<GraphTrace> trace;
  std::optional<LatticeWitness> witness;
  bool trace_side() const { return trace.has_value(); }
};

/// Throws InternalInconsistency unless exactly one certificate exists and
/// it re-verifies.
GordanAudit gordan_audit(const KGraphPresentation& g);

enum class SemigroupClass { StablyFinite, PurelyInfinite, NotStablyFinite, Unknown };
enum class CstarClass { StablyFinite, PurelyInfinite, NotStablyFinite, Unknown };

std::string to_string(SemigroupClass c);
std::string to_string(CstarClass c);

struct RuleApplication {
  std::string rule;
  std::vector<std::string> hypotheses;
};

struct SemigroupVerdict {
  SemigroupClass verdict = SemigroupClass::Unknown;
  std::vector<RuleApplication> rules;
  std::optional<GraphTrace> trace;
  std::optional<LatticeWitness> witness;
  bool isomorphic_to_naturals = false;
  /// Vertex set of the strongly connected reduction, when one was used.
  std::optional<VertexSubset> reduction;
};

SemigroupVerdict classify_semigroup(const KGraphPresentation& g);
SemigroupVerdict classify_ray(const RayPresentation& r);

inline constexpr const char* kTwistNote =
    "verdict is independent of the 2-cocycle twist: it depends only on the coordinate matrices";

struct CstarVerdict {
  CstarClass verdict = CstarClass::Unknown;
  std::string rule;
  std::vector<std::string> assumptions;
  std::vector<std::string> missing;
  bool quasidiagonal = false;
  std::string twist_note = kTwistNote;
};

CstarVerdict classify_cstar(const KGraphPresentation& g, bool assume_aperiodic);

struct StateEvaluation {
  Rational value;
  GraphTrace trace_used;
};

/// The additive state f -> sum_v f(v) tau(v).
StateEvaluation state_from_trace(const GraphTrace& t, const IntVector& f);

}  // namespace kgraph
