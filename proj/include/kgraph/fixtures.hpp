#pragma once

// Named example graphs.

#include "kgraph/model.hpp"
#include "kgraph/ray.hpp"

#include <string>
#include <variant>
#include <vector>

namespace kgraph {

using Document = std::variant<KGraphPresentation, RayPresentation>;

/// One vertex, two loops.
KGraphPresentation o2_graph();
/// One vertex, one loop.
KGraphPresentation circle_graph();
/// One vertex with loops[i] loops of colour i.
KGraphPresentation torus_graph(const std::vector<unsigned>& loops);
/// n vertices v0..v{n-1}; every colour is the cyclic shift with one edge
/// from v_c into v_{c+1 mod n}.
KGraphPresentation cycle_graph(std::size_t k, std::size_t n);
/// Vertices a, b with M = [[1, 1], [0, 2]]: {b} is hereditary and saturated.
KGraphPresentation hereditary_graph();

/// Parses o2, circle1, hereditary2, torus(n1,...,nk), cycle(k,n) and
/// bridge(b=...;r=...[;prefix=p]). Throws MalformedInput on anything else.
Document example_document(const std::string& name);

/// Names accepted by example_document, for help text.
std::vector<std::string> example_names();

}  // namespace kgraph
