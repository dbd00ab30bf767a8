// riots - supply-chain risk analysis for networked systems.
//
// Subcommands: validate, flatten, cutsets, risk, importance, whatif, report.
// Exit codes: 0 success, 2 document/graph validation failure, 3 analysis
// failure, 4 I/O failure.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riots/cutsets.hpp"
#include "riots/pipeline.hpp"
#include "riots/trust.hpp"

namespace {

struct CommonArgs {
  std::string file;
  std::string format = "table";
  std::string out;
  bool lenient = false;
  bool force_exact = false;
  bool force_mincut = false;
  std::optional<std::size_t> max_order;
  std::size_t cap = 1'000'000;
  double floor = 0.0;
  std::vector<std::string> sets;
  std::vector<std::string> set_trusts;
};

void add_input_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("file", args.file, "graph document (JSON)")->required();
  cmd->add_flag("--lenient", args.lenient,
                "tolerate unknown document keys (reported as warnings)");
}

void add_analysis_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--max-order", args.max_order,
                  "drop cutsets with more events than this (risk becomes a lower bound)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cap", args.cap,
                  "abort when an intermediate cutset collection would exceed this many sets");
  auto* exact = cmd->add_flag("--exact", args.force_exact,
                              "force the exact risk backend");
  cmd->add_flag("--mincut", args.force_mincut, "force the min-cut risk backend")
      ->excludes(exact);
}

void add_output_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--out", args.out, "write output to this file instead of stdout");
}

int exact_limit_from_env() {
  const char* raw = std::getenv("RIOTS_EXACT_LIMIT");
  if (!raw || !*raw) return riots::kDefaultExactLimit;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (!end || *end != '\0' || value < 0 || value > 64) {
    throw riots::Error(riots::ErrorKind::SchemaViolation,
                       "RIOTS_EXACT_LIMIT must be an integer in [0,64], got \"" +
                           std::string(raw) + "\"");
  }
  return static_cast<int>(value);
}

riots::NodeOverride parse_override(const std::string& text) {
  const auto pos = text.rfind('=');
  if (pos == std::string::npos || pos == 0) {
    throw riots::Error(riots::ErrorKind::SchemaViolation,
                       "override \"" + text + "\" must look like <id>=<value>");
  }
  const std::string id = text.substr(0, pos);
  const std::string value_text = text.substr(pos + 1);
  try {
    std::size_t consumed = 0;
    const double value = std::stod(value_text, &consumed);
    if (consumed != value_text.size()) throw std::invalid_argument(value_text);
    return {id, value};
  } catch (const std::exception&) {
    throw riots::Error(riots::ErrorKind::SchemaViolation,
                       "override \"" + text + "\" has a non-numeric value");
  }
}

riots::PipelineOptions pipeline_options(const CommonArgs& args) {
  riots::PipelineOptions opts;
  opts.max_order = args.max_order;
  opts.intermediate_cap = args.cap;
  if (args.force_exact) opts.backend = riots::RiskBackend::Exact;
  if (args.force_mincut) opts.backend = riots::RiskBackend::MincutApprox;
  opts.exact_limit = exact_limit_from_env();
  opts.ip_floor = args.floor;
  opts.lenient = args.lenient;
  opts.base_dir = std::filesystem::path(args.file).parent_path().string();
  return opts;
}

riots::WhatIfPatch patch_from_args(const CommonArgs& args) {
  riots::WhatIfPatch patch;
  for (const auto& text : args.sets) patch.risks.push_back(parse_override(text));
  for (const auto& text : args.set_trusts)
    patch.trusts.push_back(parse_override(text));
  return patch;
}

void write_output(const CommonArgs& args, const std::string& content) {
  if (args.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    throw riots::Error(riots::ErrorKind::IoError,
                       "cannot open \"" + args.out + "\" for writing");
  }
  out << content;
  if (!out) {
    throw riots::Error(riots::ErrorKind::IoError, "cannot write \"" + args.out + "\"");
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

riots::GraphDocument load_document(const CommonArgs& args,
                                   std::vector<std::string>* warnings) {
  return riots::parse_document(args.file, riots::ParseOptions{args.lenient}, warnings);
}

riots::AnalysisBundle analyze(const CommonArgs& args) {
  std::vector<std::string> parse_warnings;
  const auto doc = load_document(args, &parse_warnings);
  print_warnings(parse_warnings);
  auto bundle = riots::run_pipeline(doc, patch_from_args(args), pipeline_options(args));
  print_warnings(bundle.warnings);
  return bundle;
}

int run_validate(const CommonArgs& args) {
  std::vector<std::string> warnings;
  const auto doc = load_document(args, &warnings);
  auto graph = riots::build_graph(doc, &warnings);
  const auto opts = pipeline_options(args);
  const auto flat = riots::flatten(
      graph, riots::file_resolver(opts.base_dir, riots::ParseOptions{args.lenient}));
  print_warnings(warnings);
  std::ostringstream out;
  out << "OK: " << graph.components.size() << " components, "
      << graph.suppliers.size() << " suppliers, " << graph.owners.size()
      << " owners, root \"" << graph.root << "\"";
  if (!graph.is_flat()) {
    out << " (flattens to " << flat.components.size() << " components)";
  }
  out << "\n";
  write_output(args, out.str());
  return 0;
}

int run_flatten(const CommonArgs& args) {
  std::vector<std::string> warnings;
  const auto doc = load_document(args, &warnings);
  auto graph = riots::build_graph(doc, &warnings);
  const auto opts = pipeline_options(args);
  const auto flat = riots::flatten(
      graph, riots::file_resolver(opts.base_dir, riots::ParseOptions{args.lenient}));
  print_warnings(warnings);
  write_output(args, riots::document_to_json(riots::document_from_graph(flat)));
  return 0;
}

int run_cutsets(const CommonArgs& args) {
  const auto bundle = analyze(args);
  const auto format = riots::emit_format_from_string(args.format);
  std::ostringstream out;
  if (format == riots::EmitFormat::Csv || format == riots::EmitFormat::Table) {
    out << riots::cutsets_csv(bundle.cutsets, bundle.assignment);
  } else {
    riots::emit(bundle, riots::EmitFormat::Json, out);
  }
  write_output(args, out.str());
  return 0;
}

std::string shortest_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

int run_risk(const CommonArgs& args) {
  const auto bundle = analyze(args);
  const auto format = riots::emit_format_from_string(args.format);
  const std::string risk = shortest_double(bundle.report.system_risk);
  const char* backend = to_string(bundle.report.backend);
  const char* lower = bundle.report.risk_is_lower_bound ? "true" : "false";

  std::ostringstream out;
  if (format == riots::EmitFormat::Json) {
    out << "{\"backend\":\"" << backend << "\",\"risk_is_lower_bound\":" << lower
        << ",\"system_risk\":" << risk << "}\n";
  } else if (format == riots::EmitFormat::Csv) {
    out << "system_risk,backend,risk_is_lower_bound\n"
        << risk << ',' << backend << ',' << lower << "\n";
  } else {
    out << "system risk " << risk << "  (backend: " << backend;
    if (bundle.report.risk_is_lower_bound) out << ", lower bound";
    out << ")\n";
  }
  write_output(args, out.str());
  return 0;
}

int run_report(const CommonArgs& args) {
  const auto bundle = analyze(args);
  std::ostringstream out;
  riots::emit(bundle, riots::emit_format_from_string(args.format), out);
  write_output(args, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supply-chain risk analysis over system graphs"};
  app.require_subcommand(1);

  CommonArgs validate_args, flatten_args, cutsets_args, risk_args,
      importance_args, whatif_args, report_args;

  auto* validate = app.add_subcommand("validate", "check a graph document");
  add_input_options(validate, validate_args);
  validate->add_option("--out", validate_args.out, "write the summary to this file");

  auto* flatten = app.add_subcommand("flatten", "resolve sub-systems into one flat document");
  add_input_options(flatten, flatten_args);
  flatten->add_option("--out", flatten_args.out, "write the flattened document to this file");

  auto* cutsets = app.add_subcommand("cutsets", "enumerate minimal cutsets");
  add_input_options(cutsets, cutsets_args);
  add_analysis_options(cutsets, cutsets_args);
  add_output_options(cutsets, cutsets_args);

  auto* risk = app.add_subcommand("risk", "compute the system risk figure");
  add_input_options(risk, risk_args);
  add_analysis_options(risk, risk_args);
  add_output_options(risk, risk_args);

  auto* importance = app.add_subcommand("importance", "rank events by importance");
  add_input_options(importance, importance_args);
  add_analysis_options(importance, importance_args);
  add_output_options(importance, importance_args);
  importance->add_option("--floor", importance_args.floor,
                         "probability floor for improvement potential");

  auto* whatif = app.add_subcommand("whatif", "re-run the analysis with overrides");
  add_input_options(whatif, whatif_args);
  add_analysis_options(whatif, whatif_args);
  add_output_options(whatif, whatif_args);
  whatif->add_option("--floor", whatif_args.floor,
                     "probability floor for improvement potential");
  whatif->add_option("--set", whatif_args.sets,
                     "override a node's direct risk, as <id>=<value>");
  whatif->add_option("--set-trust", whatif_args.set_trusts,
                     "override a supplier's trust, as <id>=<value>");

  auto* report = app.add_subcommand("report", "full analysis report");
  add_input_options(report, report_args);
  add_analysis_options(report, report_args);
  add_output_options(report, report_args);
  report->add_option("--floor", report_args.floor,
                     "probability floor for improvement potential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return run_validate(validate_args);
    if (flatten->parsed()) return run_flatten(flatten_args);
    if (cutsets->parsed()) return run_cutsets(cutsets_args);
    if (risk->parsed()) return run_risk(risk_args);
    if (importance->parsed()) return run_report(importance_args);
    if (whatif->parsed()) return run_report(whatif_args);
    if (report->parsed()) return run_report(report_args);
  } catch (const riots::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const riots::Error& e) {
    std::cerr << "error";
    if (!e.stage().empty()) std::cerr << " (" << e.stage() << ")";
    std::cerr << ": " << e.what() << "\n";
    return riots::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
