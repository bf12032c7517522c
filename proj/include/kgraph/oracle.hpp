#pragma once

// Brute-force model of S(Λ) on a bounded box of N^{Λ⁰}.
//
// The table is the congruence generated, inside the box, by the relation
// x ~ y iff A^t_p x = A^t_q y for some degrees p, q <= (M,...,M). Every merge
// is backed by a recorded move, so equalities reported by the table are
// certain while non-merges only mean "not found".

#include "kgraph/classify.hpp"
#include "kgraph/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kgraph {

struct Box {
  unsigned max_entry = 6;   // N: every coordinate is at most N
  unsigned max_degree = 4;  // M: degrees p, q range over {0..M}^k
  std::size_t max_vectors = 2'000'000;
};

/// Number of vectors in the box for a graph on `vertices` vertices, or
/// nullopt when that number does not fit in 64 bits.
std::optional<std::uint64_t> box_size(std::size_t vertices, unsigned max_entry);

enum class MoveKind { Sim, Add };

/// One recorded merge.
///   Sim: A^t_p vector(a) = A^t_q vector(b).
///   Add: vector(a) = vector(base_a) + e_v and vector(b) = vector(base_b) + e_v
///        where base_a and base_b were already merged by earlier moves.
struct Move {
  MoveKind kind = MoveKind::Sim;
  std::size_t a = 0;
  std::size_t b = 0;
  Degree p;
  Degree q;
  std::size_t vertex = 0;
  std::size_t base_a = 0;
  std::size_t base_b = 0;
};

class ClassTable {
 public:
  const Box& box() const { return box_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return class_of_.size(); }

  /// Vectors are indexed colexicographically: index = sum_v f(v) (N+1)^v.
  IntVector vector_at(std::size_t index) const;
  std::vector<unsigned> entries_at(std::size_t index) const;
  std::optional<std::size_t> index_of(const IntVector& f) const;
  std::optional<std::size_t> index_of(const std::vector<unsigned>& f) const;

  /// Canonical class label: the smallest index in the class.
  std::size_t class_of(std::size_t index) const { return class_of_[index]; }
  bool equal(std::size_t a, std::size_t b) const { return class_of_[a] == class_of_[b]; }
  std::size_t class_count() const { return class_count_; }
  /// Classes in increasing order of their smallest member; members ascending.
  std::vector<std::vector<std::size_t>> classes() const;

  /// Merging moves in the order they were made. They form a spanning forest
  /// of the partition.
  const std::vector<Move>& moves() const { return moves_; }

  /// The chain of moves joining a and b in the merge forest, oriented from a
  /// to b: consecutive moves share an endpoint. Empty when a == b; nullopt
  /// when a and b are in different classes.
  std::optional<std::vector<Move>> explain(std::size_t a, std::size_t b) const;

 private:
  friend ClassTable build_class_table(const KGraphPresentation& g, const Box& box);
  Box box_;
  std::size_t dimension_ = 0;
  std::vector<std::uint64_t> radix_;
  std::vector<std::size_t> class_of_;
  std::size_t class_count_ = 0;
  std::vector<Move> moves_;
};

/// Throws ResourceExhausted when the box holds more than box.max_vectors.
ClassTable build_class_table(const KGraphPresentation& g, const Box& box);

struct SimWitness {
  Degree p;
  Degree q;
};

/// Lexicographically least (p, q) with coordinates <= max_degree and
/// A^t_p x = A^t_q y.
std::optional<SimWitness> sim_related(const KGraphPresentation& g, const IntVector& x, const IntVector& y,
                                      unsigned max_degree);

struct ReplayResult {
  bool ok = true;
  std::size_t moves_checked = 0;
  std::string failure;
};

/// Re-checks every move with exact arithmetic, in order: Sim identities by
/// direct multiplication, Add moves by confirming their base pair was already
/// joined by earlier moves. Finally confirms the moves generate exactly the
/// table's partition.
ReplayResult replay_moves(const KGraphPresentation& g, const ClassTable& table);

/// Some x' in the box with x + x' in the box and x + x' in the class of y.
/// The first such x' in index order; nullopt means unknown.
std::optional<IntVector> approx_le(const ClassTable& table, const IntVector& x, const IntVector& y);

/// Witness x' for 2x + x' ~ x, if one is found. Requires x nonzero with 2x
/// in the box.
std::optional<IntVector> detect_properly_infinite(const ClassTable& table, const IntVector& x);

struct ConicalAudit {
  bool passed = true;
  std::optional<std::size_t> offending;  // nonzero vector merged with 0
};

ConicalAudit conical_audit(const ClassTable& table);

struct Refinement {
  IntVector x, y, z, t;
};

/// Bounded search for x + y ~ a, z + t ~ b, x + z ~ c, y + t ~ d. Requires
/// a, b, c, d, a + b and c + d in the box with a + b ~ c + d.
std::optional<Refinement> refinement_search(const ClassTable& table, const IntVector& a, const IntVector& b,
                                            const IntVector& c, const IntVector& d, std::size_t budget = 2'000'000);

enum class CrossCheckStatus { Consistent, BoxTooSmall, Inconclusive };
std::string to_string(CrossCheckStatus s);

struct CrossCheckReport {
  CrossCheckStatus status = CrossCheckStatus::Consistent;
  SemigroupClass verdict = SemigroupClass::Unknown;
  std::size_t class_count = 0;
  std::vector<std::string> notes;
};

/// Compares classify_semigroup(g) with the table. Requires g cofinal.
/// Throws InternalInconsistency when the table refutes the verdict.
CrossCheckReport oracle_cross_check(const KGraphPresentation& g, const ClassTable& table);
CrossCheckReport oracle_cross_check(const KGraphPresentation& g, const Box& box);

}  // namespace kgraph
