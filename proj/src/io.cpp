#include "kgraph/io.hpp"

#include "kgraph/errors.hpp"

#include <limits>
#include <sstream>

namespace kgraph {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw MalformedInput(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::size_t count_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw MalformedInput(std::string("field '") + name + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

Integer integer_from(const Json& v) {
  if (v.is_number_unsigned()) return Integer(v.get<unsigned long long>());
  if (v.is_number_integer()) return Integer(v.get<long long>());
  if (v.is_string()) return parse_integer(v.get<std::string>());
  throw MalformedInput("expected an integer, got " + v.dump());
}

Json integer_to(const Integer& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return Json(x.convert_to<long long>());
  return Json(x.str());
}

IntMatrix matrix_from(const Json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows)
    throw MalformedInput(what + " must have " + std::to_string(rows) + " rows");
  IntMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw MalformedInput(what + " row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = integer_from(j[r][c]);
  }
  return m;
}

Json matrix_to(const IntMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(integer_to(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json names_of(const KGraphPresentation& g, const std::vector<std::size_t>& vs) {
  Json out = Json::array();
  for (std::size_t v : vs) out.push_back(g.vertex_name(v));
  return out;
}

Json vertex_vector(const KGraphPresentation& g, const IntVector& x) {
  Json out = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out[g.vertex_name(v)] = x(static_cast<Index>(v)).str();
  return out;
}

IntVector vertex_vector_from(const KGraphPresentation& g, const Json& j, const std::string& what) {
  if (!j.is_object() || j.size() != g.vertex_count())
    throw MalformedInput(what + " must map every vertex to an integer");
  IntVector x(static_cast<Index>(g.vertex_count()));
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!j.contains(g.vertex_name(v))) throw MalformedInput(what + " lacks vertex '" + g.vertex_name(v) + "'");
    x(static_cast<Index>(v)) = integer_from(j.at(g.vertex_name(v)));
  }
  return x;
}

Json strings(const std::vector<std::string>& items) {
  Json out = Json::array();
  for (const auto& s : items) out.push_back(s);
  return out;
}

Json rules_to(const std::vector<RuleApplication>& rules) {
  Json out = Json::array();
  for (const auto& r : rules) out.push_back(Json{{"rule", r.rule}, {"hypotheses", strings(r.hypotheses)}});
  return out;
}

Json degree_to(const Degree& d) {
  Json out = Json::array();
  for (unsigned c : d.coords()) out.push_back(c);
  return out;
}

Json structure_of(const KGraphPresentation& g, const StructuralReport& s) {
  Json out;
  out["commuting"] = s.commuting;
  out["no_sources"] = s.no_sources;
  out["cofinal"] = to_string(s.cofinality.cofinal);
  out["saturated_hereditary_counterexample"] =
      s.cofinality.counterexample ? names_of(g, s.cofinality.counterexample->members()) : Json(nullptr);
  out["direct_cofinality_check"] =
      Json{{"bound", s.cofinality.direct_bound}, {"confirmed", to_string(s.cofinality.direct_confirmation)}};
  out["strongly_connected"] = s.strongly_connected;
  if (s.full_degree_cycle)
    out["full_degree_cycle"] =
        Json{{"vertex", g.vertex_name(s.full_degree_cycle->vertex)}, {"degree", degree_to(s.full_degree_cycle->degree)}};
  else
    out["full_degree_cycle"] = nullptr;
  out["aperiodicity"] = Json{{"value", to_string(s.aperiodicity.aperiodic)},
                             {"method", s.aperiodicity.method},
                             {"witness", names_of(g, s.aperiodicity.witness)}};
  out["simplicity"] = Json{{"value", to_string(s.simplicity.simple)},
                           {"assumed", s.simplicity.assumed},
                           {"provenance", strings(s.simplicity.provenance)}};
  return out;
}

Json semigroup_to(const KGraphPresentation* g, const SemigroupVerdict& v) {
  Json out;
  out["verdict"] = to_string(v.verdict);
  out["isomorphic_to_naturals"] = v.isomorphic_to_naturals;
  out["reduction"] = (g && v.reduction) ? names_of(*g, v.reduction->members()) : Json(nullptr);
  out["rules"] = rules_to(v.rules);
  return out;
}

Json graph_report(const KGraphPresentation& g, const ReportOptions& options) {
  Json report;
  report["format"] = kReportFormat;
  report["input"] = document_to_json(g);
  report["options"] = Json{{"assume_aperiodic", options.assume_aperiodic}};
  const Validation val = validate(g);
  report["valid"] = val.valid();
  if (!val.valid()) {
    report["diagnostics"] = strings(val.diagnostics(g));
    return report;
  }
  report["structure"] = structure_of(g, structural_report(g, options.assume_aperiodic));
  const SemigroupVerdict sv = classify_semigroup(g);
  report["semigroup"] = semigroup_to(&g, sv);
  const CstarVerdict cv = classify_cstar(g, options.assume_aperiodic);
  report["cstar"] = Json{{"verdict", to_string(cv.verdict)},
                         {"rule", cv.rule},
                         {"quasidiagonal", cv.quasidiagonal},
                         {"assumptions", strings(cv.assumptions)},
                         {"missing", strings(cv.missing)},
                         {"twist_note", cv.twist_note}};
  Json certs;
  certs["graph_trace"] = sv.trace ? trace_to_json(g, *sv.trace) : Json(nullptr);
  certs["lattice_witness"] = sv.witness ? witness_to_json(g, *sv.witness) : Json(nullptr);
  if (sv.witness) {
    const InfiniteElement e = infinite_element(g, *sv.witness);
    certs["infinite_element"] = Json{{"element", vertex_vector(g, e.element)},
                                     {"lhs", vertex_vector(g, e.lhs)},
                                     {"rhs", vertex_vector(g, e.rhs)}};
  } else {
    certs["infinite_element"] = nullptr;
  }
  report["certificates"] = std::move(certs);
  return report;
}

Json ray_report(const RayPresentation& r) {
  Json report;
  report["format"] = kReportFormat;
  report["input"] = document_to_json(r);
  const RayValidation rv = validate_ray(r);
  report["valid"] = rv.valid();
  Json structure;
  structure["commuting"] = rv.commuting;
  structure["commutation_failure"] =
      rv.failure ? Json{{"i", rv.failure->i}, {"j", rv.failure->j}, {"level", rv.failure->level}} : Json(nullptr);
  structure["no_sources"] = rv.no_sources;
  structure["cofinal"] = to_string(rv.cofinal);
  report["structure"] = std::move(structure);
  if (!rv.valid()) {
    report["diagnostics"] = strings(rv.diagnostics());
    return report;
  }
  report["semigroup"] = semigroup_to(nullptr, classify_ray(r));
  return report;
}

void render(const Json& j, const std::string& indent, std::ostringstream& out);

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

bool is_flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

bool is_flat_object(const Json& j) {
  if (!j.is_object()) return false;
  for (const auto& [k, v] : j.items())
    if (v.is_structured()) return false;
  return true;
}

std::string inline_text(const Json& j) {
  std::string s;
  if (j.is_array()) {
    s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar_text(j[i]);
    return s + "]";
  }
  s = "{";
  bool first = true;
  for (const auto& [k, v] : j.items()) {
    s += (first ? "" : ", ") + k + ": " + scalar_text(v);
    first = false;
  }
  return s + "}";
}

void render(const Json& j, const std::string& indent, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (!v.is_structured() || v.empty()) {
        out << indent << k << ": " << (v.is_structured() ? (v.is_array() ? "[]" : "{}") : scalar_text(v)) << '\n';
      } else if (is_flat(v) || (is_flat_object(v) && v.size() <= 8)) {
        out << indent << k << ": " << inline_text(v) << '\n';
      } else {
        out << indent << k << ":\n";
        render(v, indent + "  ", out);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_flat(e) || is_flat_object(e)) {
        out << indent << "- " << inline_text(e) << '\n';
      } else if (e.is_structured()) {
        out << indent << "-\n";
        render(e, indent + "  ", out);
      } else {
        out << indent << "- " << scalar_text(e) << '\n';
      }
    }
  } else {
    out << indent << scalar_text(j) << '\n';
  }
}

}  // namespace

Document document_from_json(const Json& j) {
  try {
    const Json& tag = field(j, "format");
    if (!tag.is_string()) throw MalformedInput("field 'format' must be a string");
    const std::string format = tag.get<std::string>();
    const std::size_t k = count_field(j, "k");
    if (format == kGraphFormat) {
      const Json& names = field(j, "vertices");
      if (!names.is_array()) throw MalformedInput("field 'vertices' must be an array");
      std::vector<std::string> vertices;
      for (const auto& n : names) {
        if (!n.is_string()) throw MalformedInput("vertex names must be strings");
        vertices.push_back(n.get<std::string>());
      }
      const Json& ms = field(j, "matrices");
      if (!ms.is_array() || ms.size() != k)
        throw MalformedInput("field 'matrices' must list k = " + std::to_string(k) + " matrices");
      std::vector<IntMatrix> matrices;
      for (std::size_t i = 0; i < k; ++i)
        matrices.push_back(matrix_from(ms[i], vertices.size(), vertices.size(), "matrix " + std::to_string(i)));
      return KGraphPresentation(std::move(vertices), std::move(matrices));
    }
    if (format == kRayFormat) {
      const Json& sizes_json = field(j, "level_sizes");
      if (!sizes_json.is_array()) throw MalformedInput("field 'level_sizes' must be an array");
      std::vector<std::size_t> sizes;
      for (const auto& s : sizes_json) {
        if (!s.is_number_integer() || s.get<long long>() <= 0) throw MalformedInput("level sizes must be positive integers");
        sizes.push_back(s.get<std::size_t>());
      }
      const std::size_t prefix = count_field(j, "prefix_length");
      const std::size_t period = count_field(j, "period");
      if (period == 0) throw MalformedInput("period must be at least 1");
      if (sizes.size() != prefix + period)
        throw MalformedInput("level_sizes must list prefix_length + period levels");
      const Json& bs = field(j, "blocks");
      if (!bs.is_array() || bs.size() != k) throw MalformedInput("field 'blocks' must list k colours");
      std::vector<std::vector<IntMatrix>> blocks(k);
      for (std::size_t i = 0; i < k; ++i) {
        if (!bs[i].is_array() || bs[i].size() != sizes.size())
          throw MalformedInput("colour " + std::to_string(i) + " must list one block per level");
        for (std::size_t l = 0; l < sizes.size(); ++l) {
          const std::size_t next = l + 1 < sizes.size() ? sizes[l + 1] : sizes[prefix];
          blocks[i].push_back(matrix_from(bs[i][l], sizes[l], next,
                                          "block (colour " + std::to_string(i) + ", level " + std::to_string(l) + ")"));
        }
      }
      return RayPresentation(k, std::move(sizes), std::move(blocks), prefix, period);
    }
    throw MalformedInput("unknown format '" + format + "'");
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad document: ") + e.what());
  }
}

Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInput(std::string("JSON syntax error: ") + e.what());
  }
  return document_from_json(j);
}

Json document_to_json(const Document& doc) {
  Json out;
  if (const auto* g = std::get_if<KGraphPresentation>(&doc)) {
    out["format"] = kGraphFormat;
    out["k"] = g->k();
    out["vertices"] = strings(g->vertices());
    Json ms = Json::array();
    for (std::size_t i = 0; i < g->k(); ++i) ms.push_back(matrix_to(g->coordinate(i)));
    out["matrices"] = std::move(ms);
    return out;
  }
  const auto& r = std::get<RayPresentation>(doc);
  out["format"] = kRayFormat;
  out["k"] = r.k();
  out["level_sizes"] = r.level_sizes();
  Json bs = Json::array();
  for (const auto& colour : r.blocks()) {
    Json levels = Json::array();
    for (const auto& b : colour) levels.push_back(matrix_to(b));
    bs.push_back(std::move(levels));
  }
  out["blocks"] = std::move(bs);
  out["prefix_length"] = r.prefix_length();
  out["period"] = r.period();
  return out;
}

std::string emit_document(const Document& doc) { return document_to_json(doc).dump(2) + "\n"; }

Json trace_to_json(const KGraphPresentation& g, const GraphTrace& t) {
  Json out = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out[g.vertex_name(v)] = t.values.at(v).str();
  return out;
}

GraphTrace trace_from_json(const KGraphPresentation& g, const Json& j) {
  if (!j.is_object() || j.size() != g.vertex_count()) throw MalformedInput("graph trace must map every vertex");
  GraphTrace t;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const std::string& name = g.vertex_name(v);
    if (!j.contains(name) || !j.at(name).is_string()) throw MalformedInput("graph trace lacks vertex '" + name + "'");
    t.values.push_back(parse_rational(j.at(name).get<std::string>()));
  }
  return t;
}

Json witness_to_json(const KGraphPresentation& g, const LatticeWitness& w) {
  Json combination = Json::array();
  for (const auto& x : w.combination) combination.push_back(vertex_vector(g, x));
  return Json{{"witness", vertex_vector(g, w.witness)}, {"combination", std::move(combination)}};
}

LatticeWitness witness_from_json(const KGraphPresentation& g, const Json& j) {
  LatticeWitness w;
  w.witness = vertex_vector_from(g, field(j, "witness"), "lattice witness");
  const Json& combination = field(j, "combination");
  if (!combination.is_array() || combination.size() != g.k())
    throw MalformedInput("lattice combination must list one vector per colour");
  for (const auto& x : combination) w.combination.push_back(vertex_vector_from(g, x, "lattice combination"));
  return w;
}

Json classify_report(const Document& doc, const ReportOptions& options) {
  if (const auto* g = std::get_if<KGraphPresentation>(&doc)) return graph_report(*g, options);
  return ray_report(std::get<RayPresentation>(doc));
}

Json trace_report(const KGraphPresentation& g) {
  const GordanAudit audit = gordan_audit(g);
  Json out;
  out["format"] = kReportFormat;
  out["input"] = document_to_json(g);
  out["certificate"] = audit.trace ? "graph-trace" : "lattice-witness";
  out["graph_trace"] = audit.trace ? trace_to_json(g, *audit.trace) : Json(nullptr);
  out["lattice_witness"] = audit.witness ? witness_to_json(g, *audit.witness) : Json(nullptr);
  return out;
}

Json semigroup_report(const KGraphPresentation& g, const Box& box) {
  const ClassTable table = build_class_table(g, box);
  const ReplayResult replay = replay_moves(g, table);
  if (!replay.ok) throw InternalInconsistency("class table fails replay: " + replay.failure);

  auto vec = [&](const IntVector& x) {
    Json out = Json::array();
    for (Index i = 0; i < x.size(); ++i) out.push_back(integer_to(x(i)));
    return out;
  };

  Json out;
  out["format"] = kReportFormat;
  out["input"] = document_to_json(g);
  out["box"] = Json{{"max_entry", box.max_entry}, {"max_degree", box.max_degree}};
  out["vectors"] = table.size();
  out["class_count"] = table.class_count();
  std::size_t sims = 0;
  for (const Move& m : table.moves()) sims += m.kind == MoveKind::Sim;
  out["moves"] = Json{{"sim", sims}, {"add", table.moves().size() - sims}, {"replayed", replay.ok}};

  constexpr std::size_t kListed = 64;
  Json classes = Json::array();
  const auto all = table.classes();
  for (std::size_t c = 0; c < all.size() && c < kListed; ++c)
    classes.push_back(Json{{"representative", vec(table.vector_at(all[c].front()))}, {"size", all[c].size()}});
  out["classes"] = std::move(classes);
  out["classes_listed"] = std::min(all.size(), kListed);

  Json probes = Json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    IntVector e = IntVector::Zero(static_cast<Index>(g.vertex_count()));
    e(static_cast<Index>(v)) = 1;
    Json probe{{"vertex", g.vertex_name(v)}};
    if (box.max_entry < 2) {
      probe["properly_infinite"] = "unknown";
      probe["extra"] = nullptr;
    } else if (const auto extra = detect_properly_infinite(table, e)) {
      probe["properly_infinite"] = "yes";
      probe["extra"] = vec(*extra);
    } else {
      probe["properly_infinite"] = "unknown";
      probe["extra"] = nullptr;
    }
    probes.push_back(std::move(probe));
  }
  out["probes"] = std::move(probes);

  const ConicalAudit conical = conical_audit(table);
  out["conical"] = Json{{"passed", conical.passed},
                        {"offending", conical.offending ? vec(table.vector_at(*conical.offending)) : Json(nullptr)}};

  if (is_cofinal(g).cofinal == Tristate::Yes) {
    const CrossCheckReport cc = oracle_cross_check(g, table);
    out["cross_check"] = Json{{"status", to_string(cc.status)}, {"verdict", to_string(cc.verdict)}, {"notes", strings(cc.notes)}};
  } else {
    out["cross_check"] = Json{{"status", "skipped"}, {"verdict", nullptr}, {"notes", strings({"graph is not cofinal"})}};
  }
  return out;
}

std::string render_text(const Json& report) {
  std::ostringstream out;
  Json shown = report;
  shown.erase("format");
  shown.erase("input");
  render(shown, "", out);
  return out.str();
}

Document verify_report(const std::string& text) {
  Json report;
  try {
    report = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInput(std::string("JSON syntax error: ") + e.what());
  }
  const Json& tag = field(report, "format");
  if (!tag.is_string() || tag.get<std::string>() != kReportFormat) throw MalformedInput("not a kgraph report");
  const Document doc = document_from_json(field(report, "input"));
  ReportOptions options;
  if (report.contains("options")) options.assume_aperiodic = field(report.at("options"), "assume_aperiodic").get<bool>();

  if (const auto* g = std::get_if<KGraphPresentation>(&doc); g && report.contains("certificates")) {
    const Json& certs = report.at("certificates");
    if (const Json& t = field(certs, "graph_trace"); !t.is_null()) {
      const std::string why = trace_violation(*g, trace_from_json(*g, t));
      if (!why.empty()) throw MalformedInput("graph trace rejected: " + why);
    }
    if (const Json& w = field(certs, "lattice_witness"); !w.is_null()) {
      const std::string why = witness_violation(*g, witness_from_json(*g, w));
      if (!why.empty()) throw MalformedInput("lattice witness rejected: " + why);
    }
  }
  if (classify_report(doc, options) != report)
    throw MalformedInput("report does not match the verdicts recomputed from its input");
  return doc;
}

}  // namespace kgraph
