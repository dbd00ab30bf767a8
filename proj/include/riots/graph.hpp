#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riots/document.hpp"
#include "riots/errors.hpp"

namespace riots {

enum class GateType { And, Or };

const char* to_string(GateType gate);

// A component fails when its own basic event fires, when its supplier (or
// the supplier's owner) is compromised, or when its dependencies fail per
// the gate: And = all dependencies down, Or = any dependency down.
struct Component {
  std::string id;
  GateType gate = GateType::Or;
  std::vector<std::string> depends_on;
  std::string supplier;
  double direct_risk = 0.0;
  std::optional<std::string> sub_system;
  bool operator==(const Component&) const = default;
};

struct Supplier {
  std::string id;
  std::optional<std::string> owner;
  double direct_risk = 0.0;
  std::optional<double> trust;  // resolved from specified/actual when given
  bool operator==(const Supplier&) const = default;
};

struct Owner {
  std::string id;
  double direct_risk = 0.0;
  bool operator==(const Owner&) const = default;
};

struct SystemGraph {
  std::vector<Component> components;
  std::vector<Supplier> suppliers;
  std::vector<Owner> owners;
  std::string root;
  std::string integrator;

  const Component* find_component(const std::string& id) const;
  const Supplier* find_supplier(const std::string& id) const;
  const Owner* find_owner(const std::string& id) const;

  // True when no component references a sub-system document.
  bool is_flat() const;

  bool operator==(const SystemGraph&) const = default;
};

// Builds a validated graph from a parsed document. Throws ValidationError
// carrying every problem found (duplicate ids, dangling references, risks
// outside [0,1], dependency cycles, missing root, conflicting trust,
// nested ownership). Non-fatal findings (unreachable components) go to
// `warnings` when provided.
SystemGraph build_graph(const GraphDocument& doc,
                        std::vector<std::string>* warnings = nullptr);

// Structural checks for an already-constructed graph; returns the problems
// instead of throwing so callers can decide severity.
std::vector<Diagnostic> validate_graph(const SystemGraph& graph,
                                       std::vector<std::string>* warnings = nullptr);

// A resolved sub-system: the built graph plus a stable key identifying the
// referenced document, used to detect reference cycles across files.
struct ResolvedSubSystem {
  std::string key;
  SystemGraph graph;
};

using SubSystemResolver =
    std::function<std::optional<ResolvedSubSystem>(const std::string& ref)>;

// Replaces every composite component by the contents of its sub-system:
// inner node ids are prefixed "<composite>.", the inner integrator joins
// the parent as an ordinary (unprefixed) supplier, and the composite is
// substituted by the inner root, which keeps the inner gate and inherits
// the composite's outer dependencies. Flat graphs pass through unchanged;
// unresolvable references raise DanglingReference and reference cycles
// raise RecursiveDecomposition.
SystemGraph flatten(const SystemGraph& graph,
                    const SubSystemResolver& resolver = nullptr);

enum class EventKind { ComponentDirect, SupplierCompromise, OwnerCompromise };

const char* to_string(EventKind kind);

// "component:<id>", "supplier:<id>" or "owner:<id>".
std::string event_id_for(EventKind kind, const std::string& node_id);

struct BasicEvent {
  std::string id;
  EventKind kind = EventKind::ComponentDirect;
  std::string node;         // graph node the event belongs to
  double probability = 0.0; // the node's direct risk
  bool operator==(const BasicEvent&) const = default;
};

// One event per component, supplier and owner of a flat graph, sorted by
// event id. This order is the canonical event order used everywhere else.
std::vector<BasicEvent> basic_events(const SystemGraph& graph);

}  // namespace riots
