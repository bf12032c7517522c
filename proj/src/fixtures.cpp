#include "kgraph/fixtures.hpp"

#include "kgraph/errors.hpp"

#include <regex>
#include <sstream>

namespace kgraph {

namespace {

IntMatrix scalar(long x) {
  IntMatrix m(1, 1);
  m(0, 0) = x;
  return m;
}

std::vector<long> parse_list(const std::string& text, const std::string& context) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw MalformedInput("bad number '" + item + "' in " + context);
    out.push_back(std::stol(item));
  }
  if (out.empty()) throw MalformedInput("empty list in " + context);
  return out;
}

}  // namespace

KGraphPresentation o2_graph() { return KGraphPresentation({"v"}, {scalar(2)}); }

KGraphPresentation circle_graph() { return KGraphPresentation({"v"}, {scalar(1)}); }

KGraphPresentation torus_graph(const std::vector<unsigned>& loops) {
  if (loops.empty()) throw MalformedInput("torus needs at least one colour");
  std::vector<IntMatrix> matrices;
  for (unsigned n : loops) {
    if (n == 0) throw MalformedInput("torus loop counts must be positive");
    matrices.push_back(scalar(n));
  }
  return KGraphPresentation({"v"}, std::move(matrices));
}

KGraphPresentation cycle_graph(std::size_t k, std::size_t n) {
  if (k == 0 || n == 0) throw MalformedInput("cycle needs k >= 1 and n >= 1");
  const auto size = static_cast<Index>(n);
  IntMatrix shift = IntMatrix::Zero(size, size);
  for (Index c = 0; c < size; ++c) shift((c + 1) % size, c) = 1;
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  return KGraphPresentation(std::move(names), std::vector<IntMatrix>(k, shift));
}

KGraphPresentation hereditary_graph() {
  IntMatrix m(2, 2);
  m << 1, 1, 0, 2;
  return KGraphPresentation({"a", "b"}, {m});
}

Document example_document(const std::string& name) {
  if (name == "o2") return o2_graph();
  if (name == "circle1") return circle_graph();
  if (name == "hereditary2") return hereditary_graph();
  std::smatch m;
  if (std::regex_match(name, m, std::regex(R"(torus\(([0-9,]+)\))"))) {
    std::vector<unsigned> loops;
    for (long x : parse_list(m[1], name)) loops.push_back(static_cast<unsigned>(x));
    return torus_graph(loops);
  }
  if (std::regex_match(name, m, std::regex(R"(cycle\(([0-9]+),([0-9]+)\))")))
    return cycle_graph(std::stoul(m[1]), std::stoul(m[2]));
  if (std::regex_match(name, m, std::regex(R"(bridge\(b=([0-9,]+);r=([0-9,]+)(;prefix=([0-9]+))?\))"))) {
    const std::size_t prefix = m[4].matched ? std::stoul(m[4]) : 0;
    return bridge_ray(parse_list(m[1], name), parse_list(m[2], name), prefix);
  }
  throw MalformedInput("unknown example '" + name + "'");
}

std::vector<std::string> example_names() {
  return {"o2", "circle1", "hereditary2", "torus(n1,...,nk)", "cycle(k,n)", "bridge(b=b0,b1,...;r=r0,r1,...[;prefix=p])"};
}

}  // namespace kgraph
