// Python bindings for the riots core library.
//
// The module mirrors the C++ pipeline stages: parse a document, build and
// flatten the graph, compile failure logic, enumerate minimal cutsets,
// evaluate risk and importance. `render_file` runs the whole pipeline on a
// file, matching the CLI's report/whatif output.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riots/cutsets.hpp"
#include "riots/document.hpp"
#include "riots/errors.hpp"
#include "riots/graph.hpp"
#include "riots/pipeline.hpp"
#include "riots/risk.hpp"
#include "riots/trust.hpp"

namespace py = pybind11;

namespace {

riots::FunctionSet as_function_set(const std::vector<std::string>& items) {
  return riots::FunctionSet(items.begin(), items.end());
}

std::optional<riots::RiskBackend> backend_from(
    const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  if (*name == "exact") return riots::RiskBackend::Exact;
  if (*name == "mincut-approx" || *name == "mincut")
    return riots::RiskBackend::MincutApprox;
  throw riots::Error(
      riots::ErrorKind::SchemaViolation,
      "unknown risk backend \"" + *name + "\" (expected exact or mincut-approx)");
}

std::vector<std::vector<std::string>> sets_as_ids(
    const riots::CutSetCollection& cuts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(cuts.sets.size());
  for (const auto& cs : cuts.sets) {
    std::vector<std::string> ids;
    ids.reserve(cs.events.size());
    for (const auto idx : cs.events) ids.push_back(cuts.events[idx].id);
    out.push_back(std::move(ids));
  }
  return out;
}

std::vector<std::string> event_ids_of(const std::vector<riots::BasicEvent>& events) {
  std::vector<std::string> ids;
  ids.reserve(events.size());
  for (const auto& e : events) ids.push_back(e.id);
  return ids;
}

py::dict report_as_dict(const riots::ImportanceReport& report) {
  py::list rows;
  for (const auto& row : report.rows) {
    py::dict d;
    d["event_id"] = row.event_id;
    d["kind"] = std::string(riots::to_string(row.kind));
    d["node"] = row.node;
    d["risk"] = row.risk;
    d["bi"] = row.bi;
    d["ip"] = row.ip;
    d["bi_rank"] = row.bi_rank;
    d["ip_rank"] = row.ip_rank;
    rows.append(std::move(d));
  }
  py::dict out;
  out["system_risk"] = report.system_risk;
  out["backend"] = std::string(riots::to_string(report.backend));
  out["risk_is_lower_bound"] = report.risk_is_lower_bound;
  out["rows"] = std::move(rows);
  return out;
}

riots::WhatIfPatch patch_from(const std::map<std::string, double>& risks,
                              const std::map<std::string, double>& trusts) {
  riots::WhatIfPatch patch;
  for (const auto& [node, value] : risks) patch.risks.push_back({node, value});
  for (const auto& [node, value] : trusts) patch.trusts.push_back({node, value});
  return patch;
}

std::string render_file(const std::string& path, const std::string& format,
                        const std::map<std::string, double>& risks,
                        const std::map<std::string, double>& trusts,
                        std::optional<std::size_t> max_order,
                        std::size_t intermediate_cap,
                        const std::optional<std::string>& backend,
                        int exact_limit, double floor, bool lenient) {
  riots::ParseOptions popts;
  popts.lenient = lenient;
  const riots::GraphDocument doc = riots::parse_document(path, popts);

  riots::PipelineOptions opts;
  opts.max_order = max_order;
  opts.intermediate_cap = intermediate_cap;
  opts.backend = backend_from(backend);
  opts.exact_limit = exact_limit;
  opts.ip_floor = floor;
  opts.lenient = lenient;
  opts.base_dir = std::filesystem::path(path).parent_path().string();

  const riots::AnalysisBundle bundle =
      riots::run_pipeline(doc, patch_from(risks, trusts), opts);
  std::ostringstream out;
  riots::emit(bundle, riots::emit_format_from_string(format), out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_riots, m) {
  m.doc() =
      "Supply-chain failure-risk analysis: system graphs, boolean failure "
      "logic, minimal cutsets, risk and importance measures, supplier trust.";
  m.attr("__version__") = "1.0.0";

  static py::exception<riots::Error> error_exc(m, "Error");
  static py::exception<riots::ValidationError> validation_exc(
      m, "ValidationError", error_exc.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const riots::ValidationError& e) {
      py::set_error(validation_exc, e.what());
    } catch (const riots::Error& e) {
      py::set_error(error_exc, e.what());
    }
  });

  py::class_<riots::GraphDocument>(m, "GraphDocument",
                                   "Parsed, schema-checked graph document.")
      .def_readonly("version", &riots::GraphDocument::version)
      .def_readonly("root", &riots::GraphDocument::root)
      .def_readonly("integrator", &riots::GraphDocument::integrator)
      .def_readonly("description", &riots::GraphDocument::description)
      .def_property_readonly(
          "component_count",
          [](const riots::GraphDocument& d) { return d.components.size(); })
      .def_property_readonly(
          "supplier_count",
          [](const riots::GraphDocument& d) { return d.suppliers.size(); })
      .def_property_readonly(
          "owner_count",
          [](const riots::GraphDocument& d) { return d.owners.size(); })
      .def("__repr__", [](const riots::GraphDocument& d) {
        std::ostringstream out;
        out << "GraphDocument(root='" << d.root << "', components="
            << d.components.size() << ", suppliers=" << d.suppliers.size()
            << ", owners=" << d.owners.size() << ")";
        return out.str();
      });

  py::class_<riots::SystemGraph>(m, "SystemGraph",
                                 "Validated system graph of components, "
                                 "suppliers and owners.")
      .def_readonly("root", &riots::SystemGraph::root)
      .def_readonly("integrator", &riots::SystemGraph::integrator)
      .def_property_readonly("is_flat", &riots::SystemGraph::is_flat)
      .def_property_readonly("component_ids",
                             [](const riots::SystemGraph& g) {
                               std::vector<std::string> ids;
                               ids.reserve(g.components.size());
                               for (const auto& c : g.components)
                                 ids.push_back(c.id);
                               return ids;
                             })
      .def_property_readonly("supplier_ids",
                             [](const riots::SystemGraph& g) {
                               std::vector<std::string> ids;
                               ids.reserve(g.suppliers.size());
                               for (const auto& s : g.suppliers)
                                 ids.push_back(s.id);
                               return ids;
                             })
      .def_property_readonly("owner_ids",
                             [](const riots::SystemGraph& g) {
                               std::vector<std::string> ids;
                               ids.reserve(g.owners.size());
                               for (const auto& o : g.owners)
                                 ids.push_back(o.id);
                               return ids;
                             })
      .def("__repr__", [](const riots::SystemGraph& g) {
        std::ostringstream out;
        out << "SystemGraph(root='" << g.root << "', components="
            << g.components.size() << ", suppliers=" << g.suppliers.size()
            << ", owners=" << g.owners.size()
            << (g.is_flat() ? ", flat" : ", composite") << ")";
        return out.str();
      });

  py::class_<riots::BasicEvent>(m, "BasicEvent",
                                "One basic failure event of a flat graph.")
      .def_readonly("id", &riots::BasicEvent::id)
      .def_property_readonly("kind",
                             [](const riots::BasicEvent& e) {
                               return std::string(riots::to_string(e.kind));
                             })
      .def_readonly("node", &riots::BasicEvent::node)
      .def_readonly("probability", &riots::BasicEvent::probability)
      .def("__repr__", [](const riots::BasicEvent& e) {
        std::ostringstream out;
        out << "BasicEvent(id='" << e.id << "', probability=" << e.probability
            << ")";
        return out.str();
      });

  py::class_<riots::FailureExpr>(m, "FailureExpr",
                                 "Boolean failure logic of the root, as an "
                                 "AND/OR expression over basic events.")
      .def_property_readonly("event_ids",
                             [](const riots::FailureExpr& e) {
                               return event_ids_of(e.events);
                             })
      .def_property_readonly(
          "support_size",
          [](const riots::FailureExpr& e) { return e.support().size(); })
      .def("__repr__", [](const riots::FailureExpr& e) {
        std::ostringstream out;
        out << "FailureExpr(events=" << e.events.size()
            << ", support=" << e.support().size() << ")";
        return out.str();
      });

  py::class_<riots::CutSetCollection>(m, "CutSetCollection",
                                      "Minimal cutsets in canonical order "
                                      "(by size, then lexicographically).")
      .def_property_readonly("sets", &sets_as_ids)
      .def_property_readonly("event_ids",
                             [](const riots::CutSetCollection& c) {
                               return event_ids_of(c.events);
                             })
      .def_readonly("truncated", &riots::CutSetCollection::truncated)
      .def_readonly("max_order", &riots::CutSetCollection::max_order)
      .def("__len__",
           [](const riots::CutSetCollection& c) { return c.sets.size(); })
      .def("__repr__", [](const riots::CutSetCollection& c) {
        std::ostringstream out;
        out << "CutSetCollection(sets=" << c.sets.size()
            << (c.truncated ? ", truncated" : "") << ")";
        return out.str();
      });

  m.def(
      "parse_document",
      [](const std::string& path, bool lenient) {
        riots::ParseOptions opts;
        opts.lenient = lenient;
        return riots::parse_document(path, opts);
      },
      py::arg("path"), py::arg("lenient") = false,
      "Parse and schema-check a graph document from a JSON file.");

  m.def(
      "document_from_json",
      [](const std::string& text, bool lenient) {
        riots::ParseOptions opts;
        opts.lenient = lenient;
        return riots::document_from_json(text, opts);
      },
      py::arg("text"), py::arg("lenient") = false,
      "Parse and schema-check a graph document from a JSON string.");

  m.def("document_to_json", &riots::document_to_json, py::arg("document"),
        py::arg("indent") = 2,
        "Serialize a document to deterministic JSON (sorted keys).");

  m.def("build_graph",
        [](const riots::GraphDocument& doc) { return riots::build_graph(doc); },
        py::arg("document"),
        "Build and validate the system graph of a document.");

  m.def(
      "flatten",
      [](const riots::SystemGraph& graph, const std::string& base_dir) {
        if (base_dir.empty()) return riots::flatten(graph);
        return riots::flatten(graph, riots::file_resolver(base_dir));
      },
      py::arg("graph"), py::arg("base_dir") = std::string(),
      "Inline every sub-system reference. `base_dir` is the directory the "
      "referenced documents are loaded from; without it any reference fails.");

  m.def("basic_events", &riots::basic_events, py::arg("graph"),
        "Basic events of a flat graph in canonical order (sorted by id).");

  m.def(
      "jaccard_trust",
      [](const std::vector<std::string>& specified,
         const std::vector<std::string>& actual) {
        return riots::jaccard_trust(as_function_set(specified),
                                    as_function_set(actual));
      },
      py::arg("specified"), py::arg("actual"),
      "Trust as specified-vs-actual function agreement: |S & A| / |S | A|.");

  m.def("apply_trust", &riots::apply_trust, py::arg("direct_risk"),
        py::arg("trust"),
        "Discount a direct risk by trust: r + (1 - r) * (1 - t).");

  m.def(
      "effective_risks",
      [](const riots::SystemGraph& graph) {
        const auto events = riots::basic_events(graph);
        const auto assignment = riots::effective_risk_assignment(graph);
        return riots::map_from_assignment(events, assignment);
      },
      py::arg("graph"),
      "Effective probability per basic event id, trust discounts applied.");

  m.def("compile_failure_logic", &riots::compile_failure_logic,
        py::arg("graph"),
        "Compile a flat graph into the root's boolean failure expression.");

  m.def(
      "minimal_cutsets",
      [](const riots::FailureExpr& expr, std::optional<std::size_t> max_order,
         std::size_t intermediate_cap) {
        riots::CutsetOptions opts;
        opts.max_order = max_order;
        opts.intermediate_cap = intermediate_cap;
        return riots::minimal_cutsets(expr, opts);
      },
      py::arg("expr"), py::arg("max_order") = py::none(),
      py::arg("intermediate_cap") = std::size_t{1'000'000},
      "Enumerate minimal cutsets. `max_order` drops larger sets and marks "
      "the collection truncated.");

  m.def("is_cut", &riots::is_cut, py::arg("expr"), py::arg("events"),
        "Whether firing exactly these events (by id) fails the root.");

  m.def(
      "system_risk_mincut",
      [](const riots::CutSetCollection& cuts,
         const std::map<std::string, double>& risks) {
        return riots::system_risk_mincut(
            cuts, riots::assignment_from_map(cuts.events, risks));
      },
      py::arg("cutsets"), py::arg("risks"),
      "Upper-bound system risk from minimal cutsets: "
      "R = 1 - prod_a (1 - prod_y r_y). `risks` maps event id to probability "
      "and must cover every event.");

  m.def(
      "system_risk_exact",
      [](const riots::FailureExpr& expr,
         const std::map<std::string, double>& risks, int exact_limit) {
        return riots::system_risk_exact(
            expr, riots::assignment_from_map(expr.events, risks), exact_limit);
      },
      py::arg("expr"), py::arg("risks"),
      py::arg("exact_limit") = riots::kDefaultExactLimit,
      "Exact top-event probability by Shannon decomposition. Supports larger "
      "than `exact_limit` raise an error.");

  m.def(
      "importance_report",
      [](const riots::FailureExpr& expr, const riots::CutSetCollection& cuts,
         const std::map<std::string, double>& risks,
         const std::optional<std::string>& backend, int exact_limit,
         double ip_floor) {
        riots::ReportOptions opts;
        opts.backend = backend_from(backend);
        opts.exact_limit = exact_limit;
        opts.ip_floor = ip_floor;
        const auto report = riots::importance_report(
            expr, cuts, riots::assignment_from_map(expr.events, risks), opts);
        return report_as_dict(report);
      },
      py::arg("expr"), py::arg("cutsets"), py::arg("risks"),
      py::arg("backend") = py::none(),
      py::arg("exact_limit") = riots::kDefaultExactLimit,
      py::arg("ip_floor") = 0.0,
      "System risk plus per-event Birnbaum importance and improvement "
      "potential, with dense 1-based ranks. `backend` is `exact`, "
      "`mincut-approx`, or None to choose by support size.");

  m.def("render_file", &render_file, py::arg("path"),
        py::arg("format") = std::string("json"),
        py::arg("risks") = std::map<std::string, double>{},
        py::arg("trusts") = std::map<std::string, double>{},
        py::arg("max_order") = py::none(),
        py::arg("intermediate_cap") = std::size_t{1'000'000},
        py::arg("backend") = py::none(),
        py::arg("exact_limit") = riots::kDefaultExactLimit,
        py::arg("floor") = 0.0, py::arg("lenient") = false,
        "Run the full pipeline on a document file and render the analysis "
        "bundle as `json`, `csv` or `table`. `risks` and `trusts` apply "
        "what-if overrides by node id before the analysis.");
}
