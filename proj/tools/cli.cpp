#include "cli.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace kgraph::cli {

namespace {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoFailure("error while reading '" + path + "'");
  return buf.str();
}

// Writes to a temporary file and renames it so readers never see a partial
// document.
void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) throw IoFailure("cannot write '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoFailure("cannot write '" + path + "'");
}

std::string emit(const Json& report, const std::string& format) {
  return format == "json" ? report.dump(2) + "\n" : render_text(report);
}

const KGraphPresentation& finite_graph(const Document& doc, const std::string& command) {
  if (const auto* g = std::get_if<KGraphPresentation>(&doc)) return *g;
  throw PreconditionViolated(command + " needs a finite graph document (" + kGraphFormat + ")");
}

int cmd_validate(const std::string& path, const std::string& format, std::ostream& out) {
  const Document doc = parse_document(read_input(path));
  Json report;
  bool valid = false;
  if (const auto* g = std::get_if<KGraphPresentation>(&doc)) {
    const Validation v = validate(*g);
    valid = v.valid();
    Json pairs = Json::array();
    for (auto [i, j] : v.non_commuting) pairs.push_back(Json::array({i, j}));
    report = Json{{"valid", valid},
                  {"commuting", v.commuting},
                  {"no_sources", v.no_sources},
                  {"non_commuting", std::move(pairs)},
                  {"diagnostics", v.diagnostics(*g)}};
  } else {
    const RayValidation v = validate_ray(std::get<RayPresentation>(doc));
    valid = v.valid();
    report = Json{{"valid", valid},
                  {"commuting", v.commuting},
                  {"no_sources", v.no_sources},
                  {"cofinal", to_string(v.cofinal)},
                  {"diagnostics", v.diagnostics()}};
  }
  out << emit(report, format);
  return valid ? kOk : kInvalid;
}

int cmd_classify(const std::string& path, bool assume, const std::string& format, std::ostream& out) {
  const Document doc = parse_document(read_input(path));
  const Json report = classify_report(doc, ReportOptions{assume});
  out << emit(report, format);
  return report.at("valid").get<bool>() ? kOk : kInvalid;
}

int cmd_trace(const std::string& path, const std::string& format, std::ostream& out) {
  const Document doc = parse_document(read_input(path));
  out << emit(trace_report(finite_graph(doc, "trace")), format);
  return kOk;
}

int cmd_semigroup(const std::string& path, const Box& box, const std::string& format, std::ostream& out) {
  const Document doc = parse_document(read_input(path));
  out << emit(semigroup_report(finite_graph(doc, "semigroup"), box), format);
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out) {
  verify_report(read_input(path));
  out << "report verified\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable finiteness and pure infiniteness of k-graph semigroups and algebras"};
  app.name("kgraph");
  app.require_subcommand(1);

  std::string path, format = "text", name, output;
  bool assume = false;
  Box box;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check commutation and the absence of sources");
  validate_cmd->add_option("path", path, "Graph or ray document ('-' for stdin)")->required();
  add_format(validate_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Structural facts, verdicts and certificates");
  classify_cmd->add_option("path", path, "Graph or ray document ('-' for stdin)")->required();
  classify_cmd->add_flag("--assume-aperiodic", assume, "Treat the graph as aperiodic (needed for k >= 2)");
  add_format(classify_cmd);

  auto* trace_cmd = app.add_subcommand("trace", "A faithful graph trace or a lattice witness");
  trace_cmd->add_option("path", path, "Graph document ('-' for stdin)")->required();
  add_format(trace_cmd);

  auto* semigroup_cmd = app.add_subcommand("semigroup", "Brute-force class table on a bounded box");
  semigroup_cmd->add_option("path", path, "Graph document ('-' for stdin)")->required();
  semigroup_cmd->add_option("--box", box.max_entry, "Largest vector entry N")->check(CLI::PositiveNumber);
  semigroup_cmd->add_option("--max-degree", box.max_degree, "Largest degree coordinate M")->check(CLI::PositiveNumber);
  add_format(semigroup_cmd);

  auto* example_cmd = app.add_subcommand("example", "Write a named example document");
  std::string names_help = "One of:";
  for (const auto& n : example_names()) names_help += " " + n;
  example_cmd->add_option("name", name, names_help)->required();
  example_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Re-verify the certificates of a JSON classify report");
  verify_cmd->add_option("path", path, "Report file ('-' for stdin)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(path, format, out);
    if (*classify_cmd) return cmd_classify(path, assume, format, out);
    if (*trace_cmd) return cmd_trace(path, format, out);
    if (*semigroup_cmd) return cmd_semigroup(path, box, format, out);
    if (*example_cmd) {
      write_output(output, emit_document(example_document(name)), out);
      return kOk;
    }
    if (*verify_cmd) return cmd_verify(path, out);
  } catch (const IoFailure& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const MalformedInput& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const PreconditionViolated& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceExhausted& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceError;
  } catch (const InternalInconsistency& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsage;
}

}  // namespace kgraph::cli
