#pragma once

// Matrix model of a finite row-finite k-graph and its graph-theoretic
// predicates. A presentation stores only the k coordinate matrices, with
// entry (r, c) counting colour-i edges whose range is vertex r and whose
// source is vertex c.

#include "kgraph/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgraph {

enum class Tristate { No, Yes, Unknown };

std::string to_string(Tristate t);

/// An element of N^k.
class Degree {
 public:
  Degree() = default;
  explicit Degree(std::size_t k) : coords_(k, 0) {}
  Degree(std::initializer_list<unsigned> coords) : coords_(coords) {}
  explicit Degree(std::vector<unsigned> coords) : coords_(std::move(coords)) {}

  static Degree unit(std::size_t k, std::size_t i) {
    Degree d(k);
    d.coords_[i] = 1;
    return d;
  }
  static Degree constant(std::size_t k, unsigned value) { return Degree(std::vector<unsigned>(k, value)); }

  std::size_t size() const { return coords_.size(); }
  unsigned operator[](std::size_t i) const { return coords_[i]; }
  unsigned& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<unsigned>& coords() const { return coords_; }
  unsigned total() const;

  friend Degree operator+(const Degree& a, const Degree& b);
  friend bool operator==(const Degree&, const Degree&) = default;
  friend auto operator<=>(const Degree&, const Degree&) = default;

  /// Componentwise order m <= n; not the lexicographic order above.
  bool dominated_by(const Degree& other) const;

 private:
  std::vector<unsigned> coords_;
};

std::string to_string(const Degree& d);

/// All degrees with every coordinate in [0, bound], in lexicographic order.
std::vector<Degree> degrees_up_to(std::size_t k, unsigned bound);

/// Sorted set of vertex indices.
class VertexSubset {
 public:
  VertexSubset() = default;
  explicit VertexSubset(std::vector<std::size_t> members);

  static VertexSubset all(std::size_t n);

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t v) const;

  friend bool operator==(const VertexSubset&, const VertexSubset&) = default;

 private:
  std::vector<std::size_t> members_;
};

class KGraphPresentation {
 public:
  /// Throws MalformedInput on shape mismatch, negative entries, k == 0 or
  /// duplicate vertex names. Commutation and sources are not checked here;
  /// see validate().
  KGraphPresentation(std::vector<std::string> vertices, std::vector<IntMatrix> coordinate_matrices);

  std::size_t k() const { return matrices_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& vertex_name(std::size_t v) const { return vertices_[v]; }
  std::size_t vertex_index(const std::string& name) const;
  const IntMatrix& coordinate(std::size_t i) const { return matrices_[i]; }
  const std::vector<IntMatrix>& coordinates() const { return matrices_; }

  friend bool operator==(const KGraphPresentation& a, const KGraphPresentation& b);

 private:
  std::vector<std::string> vertices_;
  std::vector<IntMatrix> matrices_;
};

struct Validation {
  bool commuting = true;
  bool no_sources = true;
  /// Colour pairs (i, j), i < j, whose matrices fail to commute.
  std::vector<std::pair<std::size_t, std::size_t>> non_commuting;
  /// (colour, vertex) pairs with a zero row.
  std::vector<std::pair<std::size_t, std::size_t>> sources;

  bool valid() const { return commuting && no_sources; }
  std::vector<std::string> diagnostics(const KGraphPresentation& g) const;
};

Validation validate(const KGraphPresentation& g);

/// Throws PreconditionViolated unless validate(g) succeeds.
void require_valid(const KGraphPresentation& g);

/// A_n = M_1^{n_1} ... M_k^{n_k}.
IntMatrix degree_matrix(const KGraphPresentation& g, const Degree& n);
/// Same product with the factors taken in the given colour order.
IntMatrix degree_matrix_in_order(const KGraphPresentation& g, const Degree& n, const std::vector<std::size_t>& order);

SupportMatrix union_support(const KGraphPresentation& g);
SupportMatrix degree_support(const KGraphPresentation& g, const Degree& n);

VertexSubset union_reach(const KGraphPresentation& g, std::size_t v);
VertexSubset hereditary_closure(const KGraphPresentation& g, const VertexSubset& s);
VertexSubset saturated_hereditary_closure(const KGraphPresentation& g, const VertexSubset& s);
bool is_hereditary(const KGraphPresentation& g, const VertexSubset& s);

struct CofinalityResult {
  Tristate cofinal = Tristate::Unknown;
  /// Proper nonempty saturated hereditary subset when cofinal == No.
  std::optional<VertexSubset> counterexample;
  /// Yes when the bounded direct search found a degree for every pair.
  Tristate direct_confirmation = Tristate::Unknown;
  unsigned direct_bound = 0;
};

inline constexpr unsigned kDefaultCofinalityBound = 6;

/// Throws InternalInconsistency when the closure criterion and the bounded
/// direct definition contradict each other.
CofinalityResult is_cofinal(const KGraphPresentation& g, unsigned direct_bound = kDefaultCofinalityBound);

/// Bounded search for n <= (bound, ..., bound) with s(w Λ^n) inside s(v Λ)
/// for every pair; Yes if found for all pairs, Unknown otherwise.
Tristate cofinal_within_bound(const KGraphPresentation& g, unsigned bound);

bool is_strongly_connected(const KGraphPresentation& g);

struct CycleWitness {
  std::size_t vertex = 0;
  Degree degree;
};

/// A vertex v and n >= (1,...,1) with A_n(v, v) > 0.
CycleWitness full_degree_cycle(const KGraphPresentation& g);

/// The presentation of H Λ for nonempty hereditary H.
KGraphPresentation restrict_to(const KGraphPresentation& g, const VertexSubset& h);

struct AperiodicityResult {
  Tristate aperiodic = Tristate::Unknown;
  /// Vertices of a cycle without entrance (k = 1) or of the periodic orbit
  /// of a vertex with a unique infinite path (k >= 2).
  std::vector<std::size_t> witness;
  std::string method;
};

/// k = 1: exact Condition (L). k >= 2: No when some vertex has a single
/// infinite path ending there, Unknown otherwise.
AperiodicityResult aperiodicity(const KGraphPresentation& g);

struct SimplicityStatus {
  Tristate simple = Tristate::Unknown;
  bool assumed = false;
  std::vector<std::string> provenance;
};

SimplicityStatus simplicity_status(const KGraphPresentation& g, bool assume_aperiodic);

struct StructuralReport {
  bool no_sources = false;
  bool commuting = false;
  CofinalityResult cofinality;
  bool strongly_connected = false;
  std::optional<CycleWitness> full_degree_cycle;
  AperiodicityResult aperiodicity;
  SimplicityStatus simplicity;
};

/// Runs every structural predicate. Only validate() is attempted on an
/// invalid presentation; the other fields keep their defaults.
StructuralReport structural_report(const KGraphPresentation& g, bool assume_aperiodic);

}  // namespace kgraph
