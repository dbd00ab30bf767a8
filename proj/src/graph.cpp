#include "riots/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "riots/trust.hpp"

namespace riots {

const char* to_string(GateType gate) {
  return gate == GateType::And ? "and" : "or";
}

const Component* SystemGraph::find_component(const std::string& id) const {
  for (const auto& c : components)
    if (c.id == id) return &c;
  return nullptr;
}

const Supplier* SystemGraph::find_supplier(const std::string& id) const {
  for (const auto& s : suppliers)
    if (s.id == id) return &s;
  return nullptr;
}

const Owner* SystemGraph::find_owner(const std::string& id) const {
  for (const auto& o : owners)
    if (o.id == id) return &o;
  return nullptr;
}

bool SystemGraph::is_flat() const {
  return std::none_of(components.begin(), components.end(),
                      [](const Component& c) { return c.sub_system.has_value(); });
}

namespace {

bool valid_probability(double v) { return v >= 0.0 && v <= 1.0; }

void check_unique(const std::vector<std::string>& ids, const char* kind,
                  std::vector<Diagnostic>& issues) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      issues.push_back({ErrorKind::DuplicateId,
                        std::string(kind) + " id \"" + id + "\" appears more than once"});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_graph(const SystemGraph& graph,
                                       std::vector<std::string>* warnings) {
  std::vector<Diagnostic> issues;

  std::vector<std::string> component_ids, supplier_ids, owner_ids;
  for (const auto& c : graph.components) component_ids.push_back(c.id);
  for (const auto& s : graph.suppliers) supplier_ids.push_back(s.id);
  for (const auto& o : graph.owners) owner_ids.push_back(o.id);
  check_unique(component_ids, "component", issues);
  check_unique(supplier_ids, "supplier", issues);
  check_unique(owner_ids, "owner", issues);

  const std::set<std::string> components(component_ids.begin(), component_ids.end());
  const std::set<std::string> suppliers(supplier_ids.begin(), supplier_ids.end());
  const std::set<std::string> owners(owner_ids.begin(), owner_ids.end());

  // Ids share one namespace across kinds: a supplier and a component (or
  // any two nodes of different kinds) may not reuse an id.
  const auto check_disjoint = [&issues](const std::set<std::string>& a,
                                        const char* a_kind,
                                        const std::set<std::string>& b,
                                        const char* b_kind) {
    for (const auto& id : a) {
      if (b.count(id)) {
        issues.push_back({ErrorKind::DuplicateId,
                          "id \"" + id + "\" is used by both a " +
                              std::string(a_kind) + " and a " + b_kind});
      }
    }
  };
  check_disjoint(components, "component", suppliers, "supplier");
  check_disjoint(components, "component", owners, "owner");
  check_disjoint(suppliers, "supplier", owners, "owner");

  for (const auto& c : graph.components) {
    if (c.id.empty())
      issues.push_back({ErrorKind::InvalidId, "component with empty id"});
    if (!valid_probability(c.direct_risk))
      issues.push_back({ErrorKind::RiskOutOfRange,
                        "component \"" + c.id + "\": risk must lie in [0,1]"});
    if (!suppliers.count(c.supplier))
      issues.push_back({ErrorKind::DanglingReference,
                        "component \"" + c.id + "\" references unknown supplier \"" +
                            c.supplier + "\""});
    std::set<std::string> seen_deps;
    for (const auto& dep : c.depends_on) {
      if (!components.count(dep))
        issues.push_back({ErrorKind::DanglingReference,
                          "component \"" + c.id + "\" depends on unknown component \"" +
                              dep + "\""});
      if (!seen_deps.insert(dep).second)
        issues.push_back({ErrorKind::SchemaViolation,
                          "component \"" + c.id + "\" lists dependency \"" + dep +
                              "\" more than once"});
    }
  }

  for (const auto& s : graph.suppliers) {
    if (s.id.empty())
      issues.push_back({ErrorKind::InvalidId, "supplier with empty id"});
    if (!valid_probability(s.direct_risk))
      issues.push_back({ErrorKind::RiskOutOfRange,
                        "supplier \"" + s.id + "\": risk must lie in [0,1]"});
    if (s.trust && !valid_probability(*s.trust))
      issues.push_back({ErrorKind::RiskOutOfRange,
                        "supplier \"" + s.id + "\": trust must lie in [0,1]"});
    if (s.owner && !owners.count(*s.owner))
      issues.push_back({ErrorKind::DanglingReference,
                        "supplier \"" + s.id + "\" references unknown owner \"" +
                            *s.owner + "\""});
  }

  for (const auto& o : graph.owners) {
    if (o.id.empty())
      issues.push_back({ErrorKind::InvalidId, "owner with empty id"});
    if (!valid_probability(o.direct_risk))
      issues.push_back({ErrorKind::RiskOutOfRange,
                        "owner \"" + o.id + "\": risk must lie in [0,1]"});
  }

  if (!components.count(graph.root)) {
    issues.push_back({ErrorKind::MissingRoot,
                      graph.root.empty()
                          ? std::string("no root component set")
                          : "root \"" + graph.root + "\" is not a component"});
  }

  // Cycle detection: peel components without unresolved dependencies; what
  // remains participates in (or depends on) a dependency cycle.
  {
    std::map<std::string, std::size_t> in_degree;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& c : graph.components) in_degree[c.id] = 0;
    for (const auto& c : graph.components) {
      for (const auto& dep : c.depends_on) {
        if (!components.count(dep)) continue;
        ++in_degree[c.id];
        dependents[dep].push_back(c.id);
      }
    }
    std::deque<std::string> ready;
    for (const auto& [id, deg] : in_degree)
      if (deg == 0) ready.push_back(id);
    std::size_t resolved = 0;
    while (!ready.empty()) {
      const std::string id = ready.front();
      ready.pop_front();
      ++resolved;
      for (const auto& user : dependents[id])
        if (--in_degree[user] == 0) ready.push_back(user);
    }
    if (resolved < in_degree.size()) {
      std::vector<std::string> cyclic;
      for (const auto& [id, deg] : in_degree)
        if (deg > 0) cyclic.push_back(id);
      std::sort(cyclic.begin(), cyclic.end());
      std::ostringstream msg;
      msg << "dependency cycle involving:";
      for (const auto& id : cyclic) msg << " \"" << id << "\"";
      issues.push_back({ErrorKind::CyclicDependency, msg.str()});
    }
  }

  if (warnings && components.count(graph.root)) {
    std::set<std::string> reachable{graph.root};
    std::deque<std::string> queue{graph.root};
    while (!queue.empty()) {
      const Component* c = graph.find_component(queue.front());
      queue.pop_front();
      if (!c) continue;
      for (const auto& dep : c->depends_on)
        if (components.count(dep) && reachable.insert(dep).second)
          queue.push_back(dep);
    }
    for (const auto& c : graph.components)
      if (!reachable.count(c.id))
        warnings->push_back("component \"" + c.id +
                            "\" is not reachable from root \"" + graph.root + "\"");
  }

  return issues;
}

SystemGraph build_graph(const GraphDocument& doc,
                        std::vector<std::string>* warnings) {
  std::vector<Diagnostic> issues;
  SystemGraph graph;
  graph.root = doc.root;
  graph.integrator = doc.integrator;

  for (const auto& rec : doc.components) {
    Component c;
    c.id = rec.id;
    if (rec.gate == "and") {
      c.gate = GateType::And;
    } else if (rec.gate == "or") {
      c.gate = GateType::Or;
    } else {
      issues.push_back({ErrorKind::SchemaViolation,
                        "component \"" + rec.id + "\": gate must be \"and\" or \"or\", got \"" +
                            rec.gate + "\""});
    }
    c.depends_on = rec.depends_on;
    c.supplier = rec.supplier;
    c.direct_risk = rec.risk;
    c.sub_system = rec.sub_system;
    graph.components.push_back(std::move(c));
  }

  for (const auto& rec : doc.suppliers) {
    Supplier s;
    s.id = rec.id;
    s.owner = rec.owner;
    s.direct_risk = rec.risk;
    const bool has_sets = rec.specified.has_value() || rec.actual.has_value();
    if (rec.trust && has_sets) {
      issues.push_back({ErrorKind::ConflictingTrust,
                        "supplier \"" + rec.id +
                            "\": both a literal trust and specified/actual sets given"});
    } else if (has_sets) {
      if (!rec.specified || !rec.actual) {
        issues.push_back({ErrorKind::SchemaViolation,
                          "supplier \"" + rec.id +
                              "\": specified and actual must be given together"});
      } else {
        const FunctionSet spec_set(rec.specified->begin(), rec.specified->end());
        const FunctionSet act_set(rec.actual->begin(), rec.actual->end());
        if (spec_set.empty() && act_set.empty()) {
          issues.push_back({ErrorKind::EmptyUniverse,
                            "supplier \"" + rec.id +
                                "\": specified and actual are both empty"});
        } else {
          s.trust = jaccard_trust(spec_set, act_set);
        }
      }
    } else {
      s.trust = rec.trust;
    }
    graph.suppliers.push_back(std::move(s));
  }

  for (const auto& rec : doc.owners) {
    if (rec.owner) {
      issues.push_back({ErrorKind::UnsupportedFeature,
                        "owner \"" + rec.id +
                            "\": nested ownership is not modeled (one level only)"});
    }
    graph.owners.push_back({rec.id, rec.risk});
  }

  auto structural = validate_graph(graph, warnings);
  issues.insert(issues.end(), structural.begin(), structural.end());
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return graph;
}

namespace {

std::string prefixed(const std::string& prefix, const std::string& id) {
  return prefix + "." + id;
}

bool same_supplier(const Supplier& a, const Supplier& b) { return a == b; }

SystemGraph flatten_impl(const SystemGraph& graph, const SubSystemResolver& resolver,
                         std::vector<std::string>& ancestry,
                         std::set<std::string>& ancestry_keys) {
  if (graph.is_flat()) return graph;

  SystemGraph out;
  out.root = graph.root;
  out.integrator = graph.integrator;
  out.suppliers = graph.suppliers;
  out.owners = graph.owners;

  std::vector<Diagnostic> issues;
  // Composite id -> id of the component that replaces it.
  std::map<std::string, std::string> rename;

  auto add_supplier = [&](const Supplier& s) {
    for (const auto& existing : out.suppliers) {
      if (existing.id != s.id) continue;
      if (!same_supplier(existing, s)) {
        issues.push_back({ErrorKind::DuplicateId,
                          "supplier \"" + s.id +
                              "\" has conflicting definitions after flattening"});
      }
      return;
    }
    out.suppliers.push_back(s);
  };

  for (const auto& comp : graph.components) {
    if (!comp.sub_system) {
      out.components.push_back(comp);
      continue;
    }

    const std::string& ref = *comp.sub_system;
    if (!resolver) {
      throw Error(ErrorKind::DanglingReference,
                  "component \"" + comp.id + "\" references sub-system \"" + ref +
                      "\" but no resolver is available");
    }
    auto resolved = resolver(ref);
    if (!resolved) {
      throw Error(ErrorKind::DanglingReference,
                  "component \"" + comp.id + "\" references unresolvable sub-system \"" +
                      ref + "\"");
    }
    if (ancestry_keys.count(resolved->key)) {
      std::ostringstream msg;
      msg << "sub-system \"" << ref << "\" participates in a reference cycle:";
      for (const auto& key : ancestry) msg << " " << key << " ->";
      msg << " " << resolved->key;
      throw Error(ErrorKind::RecursiveDecomposition, msg.str());
    }

    ancestry.push_back(resolved->key);
    ancestry_keys.insert(resolved->key);
    const SystemGraph sub = flatten_impl(resolved->graph, resolver, ancestry, ancestry_keys);
    ancestry_keys.erase(resolved->key);
    ancestry.pop_back();

    const std::string& integrator = sub.integrator;
    if (integrator.empty()) {
      throw Error(ErrorKind::SchemaViolation,
                  "sub-system \"" + ref + "\" does not name an integrator");
    }

    auto map_supplier_id = [&](const std::string& id) {
      return id == integrator ? id : prefixed(comp.id, id);
    };

    bool integrator_declared = false;
    for (const auto& s : sub.suppliers) {
      Supplier copy = s;
      copy.id = map_supplier_id(s.id);
      if (s.owner) copy.owner = prefixed(comp.id, *s.owner);
      if (s.id == integrator) integrator_declared = true;
      add_supplier(copy);
    }
    if (!integrator_declared) add_supplier({integrator, std::nullopt, 0.0, std::nullopt});

    for (const auto& o : sub.owners) {
      out.owners.push_back({prefixed(comp.id, o.id), o.direct_risk});
    }

    const std::string replacement_id = prefixed(comp.id, sub.root);
    rename[comp.id] = replacement_id;

    for (const auto& inner : sub.components) {
      Component copy = inner;
      copy.id = prefixed(comp.id, inner.id);
      copy.supplier = map_supplier_id(inner.supplier);
      for (auto& dep : copy.depends_on) dep = prefixed(comp.id, dep);
      if (inner.id == sub.root) {
        copy.supplier = integrator;
        for (const auto& outer_dep : comp.depends_on) {
          if (std::find(copy.depends_on.begin(), copy.depends_on.end(), outer_dep) ==
              copy.depends_on.end()) {
            copy.depends_on.push_back(outer_dep);
          }
        }
      }
      out.components.push_back(std::move(copy));
    }
  }

  // Outer dependency names may themselves point at composites; route every
  // edge (and the root) to the replacement components.
  for (auto& comp : out.components) {
    for (auto& dep : comp.depends_on) {
      auto it = rename.find(dep);
      if (it != rename.end()) dep = it->second;
    }
  }
  if (auto it = rename.find(out.root); it != rename.end()) out.root = it->second;

  auto structural = validate_graph(out, nullptr);
  issues.insert(issues.end(), structural.begin(), structural.end());
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return out;
}

}  // namespace

SystemGraph flatten(const SystemGraph& graph, const SubSystemResolver& resolver) {
  std::vector<std::string> ancestry;
  std::set<std::string> ancestry_keys;
  return flatten_impl(graph, resolver, ancestry, ancestry_keys);
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ComponentDirect: return "component_direct";
    case EventKind::SupplierCompromise: return "supplier_compromise";
    case EventKind::OwnerCompromise: return "owner_compromise";
  }
  return "unknown";
}

std::string event_id_for(EventKind kind, const std::string& node_id) {
  switch (kind) {
    case EventKind::ComponentDirect: return "component:" + node_id;
    case EventKind::SupplierCompromise: return "supplier:" + node_id;
    case EventKind::OwnerCompromise: return "owner:" + node_id;
  }
  return node_id;
}

std::vector<BasicEvent> basic_events(const SystemGraph& graph) {
  if (!graph.is_flat()) {
    throw Error(ErrorKind::NotFlat,
                "basic events require a flat graph; call flatten first");
  }
  std::vector<BasicEvent> events;
  events.reserve(graph.components.size() + graph.suppliers.size() + graph.owners.size());
  for (const auto& c : graph.components) {
    events.push_back({event_id_for(EventKind::ComponentDirect, c.id),
                      EventKind::ComponentDirect, c.id, c.direct_risk});
  }
  for (const auto& s : graph.suppliers) {
    events.push_back({event_id_for(EventKind::SupplierCompromise, s.id),
                      EventKind::SupplierCompromise, s.id, s.direct_risk});
  }
  for (const auto& o : graph.owners) {
    events.push_back({event_id_for(EventKind::OwnerCompromise, o.id),
                      EventKind::OwnerCompromise, o.id, o.direct_risk});
  }
  std::sort(events.begin(), events.end(),
            [](const BasicEvent& a, const BasicEvent& b) { return a.id < b.id; });
  return events;
}

}  // namespace riots
