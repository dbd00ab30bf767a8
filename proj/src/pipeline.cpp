#include "riots/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "riots/cutsets.hpp"
#include "riots/trust.hpp"

namespace riots {

namespace {

using nlohmann::json;

void tag_stage(Error& e, const char* stage) {
  if (e.stage().empty()) e.set_stage(stage);
}

}  // namespace

SystemGraph apply_patch(const SystemGraph& graph, const WhatIfPatch& patch) {
  SystemGraph out = graph;

  // Overrides accept a bare node id or a "component:"/"supplier:"/"owner:"
  // qualified one when the same id names nodes of different kinds.
  auto split_target = [](const std::string& target) {
    std::pair<std::string, std::string> parts{"", target};
    const auto pos = target.find(':');
    if (pos != std::string::npos) {
      parts.first = target.substr(0, pos);
      parts.second = target.substr(pos + 1);
    }
    return parts;
  };

  for (const auto& override_ : patch.risks) {
    if (!(override_.value >= 0.0 && override_.value <= 1.0)) {
      throw Error(ErrorKind::OutOfRange,
                  "override for \"" + override_.node + "\" must lie in [0,1]");
    }
    const auto [kind, node] = split_target(override_.node);
    if (!kind.empty() && kind != "component" && kind != "supplier" && kind != "owner") {
      throw Error(ErrorKind::DanglingReference,
                  "override \"" + override_.node + "\" uses unknown node kind \"" +
                      kind + "\"");
    }
    std::vector<double*> targets;
    if (kind.empty() || kind == "component") {
      for (auto& c : out.components)
        if (c.id == node) targets.push_back(&c.direct_risk);
    }
    if (kind.empty() || kind == "supplier") {
      for (auto& s : out.suppliers)
        if (s.id == node) targets.push_back(&s.direct_risk);
    }
    if (kind.empty() || kind == "owner") {
      for (auto& o : out.owners)
        if (o.id == node) targets.push_back(&o.direct_risk);
    }
    if (targets.empty()) {
      throw Error(ErrorKind::DanglingReference,
                  "override references unknown node \"" + override_.node + "\"");
    }
    if (targets.size() > 1) {
      throw Error(ErrorKind::DanglingReference,
                  "override \"" + override_.node +
                      "\" is ambiguous; qualify it as component:, supplier: or owner:");
    }
    *targets.front() = override_.value;
  }

  for (const auto& override_ : patch.trusts) {
    if (!(override_.value >= 0.0 && override_.value <= 1.0)) {
      throw Error(ErrorKind::OutOfRange,
                  "trust override for \"" + override_.node + "\" must lie in [0,1]");
    }
    auto [kind, node] = split_target(override_.node);
    if (!kind.empty() && kind != "supplier") {
      throw Error(ErrorKind::DanglingReference,
                  "trust override \"" + override_.node + "\" must target a supplier");
    }
    Supplier* target = nullptr;
    for (auto& s : out.suppliers)
      if (s.id == node) target = &s;
    if (!target) {
      throw Error(ErrorKind::DanglingReference,
                  "trust override references unknown supplier \"" + override_.node + "\"");
    }
    target->trust = override_.value;
  }

  return out;
}

GraphDocument document_from_graph(const SystemGraph& graph) {
  GraphDocument doc;
  doc.version = 1;
  doc.root = graph.root;
  doc.integrator = graph.integrator;
  for (const auto& c : graph.components) {
    doc.components.push_back({c.id, to_string(c.gate), c.depends_on, c.supplier,
                              c.direct_risk, c.sub_system});
  }
  for (const auto& s : graph.suppliers) {
    doc.suppliers.push_back(
        {s.id, s.owner, s.direct_risk, s.trust, std::nullopt, std::nullopt});
  }
  for (const auto& o : graph.owners) {
    doc.owners.push_back({o.id, o.direct_risk, std::nullopt});
  }
  return doc;
}

SubSystemResolver file_resolver(const std::string& base_dir, const ParseOptions& opts) {
  return [base_dir, opts](const std::string& ref) -> std::optional<ResolvedSubSystem> {
    namespace fs = std::filesystem;
    fs::path path(ref);
    if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
    std::error_code ec;
    fs::path canonical = fs::weakly_canonical(path, ec);
    if (ec) canonical = path;
    if (!fs::exists(canonical)) return std::nullopt;
    const GraphDocument doc = parse_document(canonical.string(), opts, nullptr);
    return ResolvedSubSystem{canonical.string(), build_graph(doc, nullptr)};
  };
}

AnalysisBundle run_pipeline(const GraphDocument& doc, const WhatIfPatch& patch,
                            const PipelineOptions& opts) {
  AnalysisBundle bundle;

  SystemGraph graph;
  try {
    graph = build_graph(doc, &bundle.warnings);
  } catch (Error& e) {
    tag_stage(e, "build");
    throw;
  }

  try {
    SubSystemResolver resolver;
    if (!opts.base_dir.empty()) {
      resolver = file_resolver(opts.base_dir, ParseOptions{opts.lenient});
    }
    graph = flatten(graph, resolver);
  } catch (Error& e) {
    tag_stage(e, "flatten");
    throw;
  }

  try {
    graph = apply_patch(graph, patch);
  } catch (Error& e) {
    tag_stage(e, "patch");
    throw;
  }
  bundle.graph = std::move(graph);

  try {
    bundle.events = basic_events(bundle.graph);
    bundle.assignment = effective_risk_assignment(bundle.graph);
  } catch (Error& e) {
    tag_stage(e, "trust");
    throw;
  }

  FailureExpr expr;
  try {
    expr = compile_failure_logic(bundle.graph);
    bundle.cutsets = minimal_cutsets(expr, {opts.max_order, opts.intermediate_cap});
  } catch (Error& e) {
    tag_stage(e, "cutsets");
    throw;
  }

  try {
    bundle.report = importance_report(
        expr, bundle.cutsets, bundle.assignment,
        {opts.backend, opts.exact_limit, opts.ip_floor});
  } catch (Error& e) {
    tag_stage(e, "report");
    throw;
  }

  return bundle;
}

EmitFormat emit_format_from_string(const std::string& name) {
  if (name == "table") return EmitFormat::Table;
  if (name == "json") return EmitFormat::Json;
  if (name == "csv") return EmitFormat::Csv;
  throw Error(ErrorKind::SchemaViolation,
              "unknown format \"" + name + "\" (expected table, json or csv)");
}

namespace {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

json cutsets_to_json(const CutSetCollection& cuts, std::span<const double> r) {
  json out;
  out["truncated"] = cuts.truncated;
  if (cuts.max_order) out["max_order"] = *cuts.max_order;
  json sets = json::array();
  for (const auto& cs : cuts.sets) {
    json entry;
    entry["order"] = cs.events.size();
    json ids = json::array();
    for (const auto e : cs.events) ids.push_back(cuts.events[e].id);
    entry["events"] = std::move(ids);
    entry["probability_product"] = cutset_probability(cs, r);
    sets.push_back(std::move(entry));
  }
  out["sets"] = std::move(sets);
  return out;
}

}  // namespace

std::string bundle_to_json(const AnalysisBundle& bundle, int indent) {
  json j;
  j["riots_version"] = 1;
  j["root"] = bundle.graph.root;
  j["backend"] = to_string(bundle.report.backend);
  j["system_risk"] = bundle.report.system_risk;
  j["risk_is_lower_bound"] = bundle.report.risk_is_lower_bound;

  json events = json::array();
  for (std::size_t i = 0; i < bundle.events.size(); ++i) {
    const auto& ev = bundle.events[i];
    json entry;
    entry["event_id"] = ev.id;
    entry["kind"] = to_string(ev.kind);
    entry["node"] = ev.node;
    entry["direct_risk"] = ev.probability;
    entry["probability"] =
        i < bundle.assignment.size() ? bundle.assignment[i] : ev.probability;
    events.push_back(std::move(entry));
  }
  j["events"] = std::move(events);
  j["cutsets"] = cutsets_to_json(bundle.cutsets, bundle.assignment);

  json importance = json::array();
  for (const auto& row : bundle.report.rows) {
    json entry;
    entry["event_id"] = row.event_id;
    entry["kind"] = to_string(row.kind);
    entry["risk"] = row.risk;
    entry["bi"] = row.bi;
    entry["ip"] = row.ip;
    entry["bi_rank"] = row.bi_rank;
    entry["ip_rank"] = row.ip_rank;
    importance.push_back(std::move(entry));
  }
  j["importance"] = std::move(importance);

  return j.dump(indent) + "\n";
}

std::string importance_csv(const ImportanceReport& report) {
  std::ostringstream out;
  out << "event_id,kind,risk,bi,ip,bi_rank,ip_rank\n";
  for (const auto& row : report.rows) {
    out << csv_quote(row.event_id) << ',' << to_string(row.kind) << ','
        << format_double(row.risk) << ',' << format_double(row.bi) << ','
        << format_double(row.ip) << ',' << row.bi_rank << ',' << row.ip_rank
        << '\n';
  }
  return out.str();
}

std::string cutsets_csv(const CutSetCollection& cuts, std::span<const double> r) {
  std::ostringstream out;
  out << "order,events,probability_product\n";
  for (const auto& cs : cuts.sets) {
    std::string joined;
    for (std::size_t i = 0; i < cs.events.size(); ++i) {
      if (i) joined += ';';
      joined += cuts.events[cs.events[i]].id;
    }
    out << cs.events.size() << ',' << csv_quote(joined) << ','
        << format_double(cutset_probability(cs, r)) << '\n';
  }
  return out.str();
}

namespace {

void emit_table(const AnalysisBundle& bundle, std::ostream& out) {
  out << "system risk      " << format_double(bundle.report.system_risk)
      << "  (backend: " << to_string(bundle.report.backend);
  if (bundle.report.risk_is_lower_bound) out << ", lower bound";
  out << ")\n";
  out << "basic events     " << bundle.events.size() << "\n";
  out << "minimal cutsets  " << bundle.cutsets.sets.size();
  if (bundle.cutsets.max_order) {
    out << "  (max order " << *bundle.cutsets.max_order;
    if (bundle.cutsets.truncated) out << ", truncated";
    out << ")";
  }
  out << "\n\n";

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"event_id", "kind", "risk", "bi", "ip", "bi_rank", "ip_rank"});
  std::vector<const ImportanceRow*> sorted;
  for (const auto& row : bundle.report.rows) sorted.push_back(&row);
  std::sort(sorted.begin(), sorted.end(),
            [](const ImportanceRow* a, const ImportanceRow* b) {
              return a->bi_rank < b->bi_rank;
            });
  for (const auto* row : sorted) {
    rows.push_back({row->event_id, to_string(row->kind), format_double(row->risk),
                    format_double(row->bi), format_double(row->ip),
                    std::to_string(row->bi_rank), std::to_string(row->ip_rank)});
  }

  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size())
        out << std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  }
}

}  // namespace

void emit(const AnalysisBundle& bundle, EmitFormat format, std::ostream& out) {
  switch (format) {
    case EmitFormat::Json:
      out << bundle_to_json(bundle);
      break;
    case EmitFormat::Csv:
      out << importance_csv(bundle.report);
      break;
    case EmitFormat::Table:
      emit_table(bundle, out);
      break;
  }
}

}  // namespace riots
