#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "riots/document.hpp"
#include "riots/graph.hpp"
#include "riots/risk.hpp"

namespace riots {

struct NodeOverride {
  std::string node;
  double value = 0.0;
  bool operator==(const NodeOverride&) const = default;
};

// What-if overrides, applied to the flattened graph before analysis.
// `risks` targets any node's direct risk, `trusts` a supplier's trust.
struct WhatIfPatch {
  std::vector<NodeOverride> risks;
  std::vector<NodeOverride> trusts;
  bool empty() const { return risks.empty() && trusts.empty(); }
  bool operator==(const WhatIfPatch&) const = default;
};

struct PipelineOptions {
  std::optional<std::size_t> max_order;
  std::size_t intermediate_cap = 1'000'000;
  std::optional<RiskBackend> backend;
  int exact_limit = kDefaultExactLimit;
  double ip_floor = 0.0;
  bool lenient = false;
  // Directory for resolving sub_system references; set from the document
  // path by the CLI. Empty disables file resolution.
  std::string base_dir;
};

struct AnalysisBundle {
  SystemGraph graph;  // flattened and patched
  std::vector<BasicEvent> events;
  RiskAssignment assignment;  // effective probabilities, trust applied
  CutSetCollection cutsets;
  ImportanceReport report;
  std::vector<std::string> warnings;
};

// build -> flatten -> patch -> trust -> compile -> cutsets -> importance.
// Errors are re-thrown with the failing stage recorded on the exception.
AnalysisBundle run_pipeline(const GraphDocument& doc,
                            const WhatIfPatch& patch = {},
                            const PipelineOptions& opts = {});

// Applies a patch to a flat graph. Unknown node ids raise DanglingReference,
// values outside [0,1] raise OutOfRange, trust overrides on non-suppliers
// raise DanglingReference as well.
SystemGraph apply_patch(const SystemGraph& graph, const WhatIfPatch& patch);

// Document view of a (typically flattened) graph, for inspection output.
GraphDocument document_from_graph(const SystemGraph& graph);

// Resolver that loads "<base_dir>/<ref>" as a graph document and builds it.
// The cycle-detection key is the canonicalized file path.
SubSystemResolver file_resolver(const std::string& base_dir,
                                const ParseOptions& opts = {});

enum class EmitFormat { Table, Json, Csv };

EmitFormat emit_format_from_string(const std::string& name);

// Serializations. JSON output is deterministic: object keys are sorted and
// numbers use shortest round-trip formatting, so equal bundles give equal
// bytes. CSV quoting only triggers on delimiters, quotes or newlines.
std::string bundle_to_json(const AnalysisBundle& bundle, int indent = 2);
std::string importance_csv(const ImportanceReport& report);
std::string cutsets_csv(const CutSetCollection& cuts, std::span<const double> r);
void emit(const AnalysisBundle& bundle, EmitFormat format, std::ostream& out);

}  // namespace riots
