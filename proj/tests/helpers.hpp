#pragma once

// Shared test utilities: compact builders for documents and failure
// expressions, independent reference implementations used as oracles, and
// a seeded random-document generator for property tests.
//
// The oracles deliberately share no code with the library: truth values
// come from a plain recursive walk, minimal cutsets from enumerating all
// 2^n subsets, and exact risk from direct conditioning over the support.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riots/cutsets.hpp"
#include "riots/document.hpp"
#include "riots/graph.hpp"
#include "riots/risk.hpp"

namespace riots::testing {

// ---------------------------------------------------------------------------
// Fixture locations
// ---------------------------------------------------------------------------

inline std::string fixture(const std::string& name) {
  return std::string(RIOTS_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Document builders
// ---------------------------------------------------------------------------

inline ComponentRecord comp(std::string id, std::string supplier, double risk,
                            std::string gate = "or",
                            std::vector<std::string> deps = {}) {
  ComponentRecord c;
  c.id = std::move(id);
  c.gate = std::move(gate);
  c.depends_on = std::move(deps);
  c.supplier = std::move(supplier);
  c.risk = risk;
  return c;
}

inline SupplierRecord supp(std::string id, double risk,
                           std::optional<std::string> owner = std::nullopt) {
  SupplierRecord s;
  s.id = std::move(id);
  s.owner = std::move(owner);
  s.risk = risk;
  return s;
}

inline OwnerRecord own(std::string id, double risk) {
  OwnerRecord o;
  o.id = std::move(id);
  o.risk = risk;
  return o;
}

inline GraphDocument make_doc(std::string root,
                              std::vector<ComponentRecord> components,
                              std::vector<SupplierRecord> suppliers,
                              std::vector<OwnerRecord> owners = {}) {
  GraphDocument doc;
  doc.root = std::move(root);
  doc.components = std::move(components);
  doc.suppliers = std::move(suppliers);
  doc.owners = std::move(owners);
  return doc;
}

// ---------------------------------------------------------------------------
// Failure-expression builder (hand-made arenas for boolean examples)
// ---------------------------------------------------------------------------

class ExprBuilder {
 public:
  // The event table is sorted by id, as the canonical order requires; look
  // indices up through idx() rather than assuming the given order.
  explicit ExprBuilder(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) {
      BasicEvent event;
      event.id = id;
      event.kind = EventKind::ComponentDirect;
      event.node = id;
      expr_.events.push_back(std::move(event));
    }
  }

  std::uint32_t idx(const std::string& id) const {
    return *expr_.event_index(id);
  }

  std::uint32_t leaf(const std::string& id) {
    FailureExpr::Node node;
    node.kind = FailureExpr::NodeKind::Leaf;
    node.event = idx(id);
    expr_.nodes.push_back(std::move(node));
    return static_cast<std::uint32_t>(expr_.nodes.size() - 1);
  }

  std::uint32_t and_gate(std::vector<std::uint32_t> children) {
    return gate(FailureExpr::NodeKind::And, std::move(children));
  }

  std::uint32_t or_gate(std::vector<std::uint32_t> children) {
    return gate(FailureExpr::NodeKind::Or, std::move(children));
  }

  FailureExpr finish(std::uint32_t root) {
    expr_.root = root;
    return std::move(expr_);
  }

 private:
  std::uint32_t gate(FailureExpr::NodeKind kind,
                     std::vector<std::uint32_t> children) {
    FailureExpr::Node node;
    node.kind = kind;
    node.children = std::move(children);
    expr_.nodes.push_back(std::move(node));
    return static_cast<std::uint32_t>(expr_.nodes.size() - 1);
  }

  FailureExpr expr_;
};

// ---------------------------------------------------------------------------
// Oracle 1: truth value under an event bitmask
// ---------------------------------------------------------------------------

inline bool eval_mask(const FailureExpr& expr, std::uint32_t node_index,
                      std::uint64_t mask) {
  const auto& node = expr.nodes[node_index];
  switch (node.kind) {
    case FailureExpr::NodeKind::Leaf:
      return (mask >> node.event) & 1u;
    case FailureExpr::NodeKind::And:
      for (const auto child : node.children) {
        if (!eval_mask(expr, child, mask)) return false;
      }
      return true;
    case FailureExpr::NodeKind::Or:
      for (const auto child : node.children) {
        if (eval_mask(expr, child, mask)) return true;
      }
      return false;
  }
  return false;
}

inline bool eval_mask(const FailureExpr& expr, std::uint64_t mask) {
  return eval_mask(expr, expr.root, mask);
}

// ---------------------------------------------------------------------------
// Oracle 2: minimal failing subsets by sheer enumeration
// ---------------------------------------------------------------------------

// Tries every subset of events; keeps the ones that fail the system while
// every single-event removal survives. Because the function is monotone,
// that one-step check suffices for minimality. Returned in the canonical
// collection order (size first, then lexicographic by indices).
inline std::vector<std::vector<std::uint32_t>> minimal_failing_subsets(
    const FailureExpr& expr) {
  const std::size_t n = expr.events.size();
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (!eval_mask(expr, mask)) continue;
    bool minimal = true;
    for (std::size_t bit = 0; bit < n && minimal; ++bit) {
      if ((mask >> bit) & 1u) {
        if (eval_mask(expr, mask & ~(std::uint64_t{1} << bit))) minimal = false;
      }
    }
    if (!minimal) continue;
    std::vector<std::uint32_t> set;
    for (std::size_t bit = 0; bit < n; ++bit) {
      if ((mask >> bit) & 1u) set.push_back(static_cast<std::uint32_t>(bit));
    }
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end(),
            [](const std::vector<std::uint32_t>& a,
               const std::vector<std::uint32_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Oracle 3: exact risk by direct conditioning
// ---------------------------------------------------------------------------

inline double enumeration_risk_rec(const FailureExpr& expr,
                                   const std::vector<std::uint32_t>& support,
                                   std::span<const double> r, std::size_t level,
                                   std::uint64_t mask) {
  if (level == support.size()) return eval_mask(expr, mask) ? 1.0 : 0.0;
  const std::uint32_t event = support[level];
  const double p = r[event];
  const double q = 1.0 - p;
  const double off = enumeration_risk_rec(expr, support, r, level + 1, mask);
  const double on = enumeration_risk_rec(expr, support, r, level + 1,
                                         mask | (std::uint64_t{1} << event));
  return q * off + p * on;
}

inline double enumeration_risk(const FailureExpr& expr, std::span<const double> r) {
  const auto support = expr.support();
  return enumeration_risk_rec(expr, support, r, 0, 0);
}

// ---------------------------------------------------------------------------
// Conversions used when comparing against the oracles
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::uint32_t>> sets_of(const CutSetCollection& cuts) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(cuts.sets.size());
  for (const auto& cs : cuts.sets) out.push_back(cs.events);
  return out;
}

inline std::vector<std::vector<std::string>> sets_as_ids(const CutSetCollection& cuts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(cuts.sets.size());
  for (const auto& cs : cuts.sets) {
    std::vector<std::string> ids;
    ids.reserve(cs.events.size());
    for (const auto e : cs.events) ids.push_back(cuts.events[e].id);
    out.push_back(std::move(ids));
  }
  return out;
}

inline RiskAssignment raw_assignment(const std::vector<BasicEvent>& events) {
  RiskAssignment r;
  r.reserve(events.size());
  for (const auto& event : events) r.push_back(event.probability);
  return r;
}

inline bool pairwise_disjoint(const CutSetCollection& cuts) {
  std::vector<int> seen(cuts.events.size(), 0);
  for (const auto& cs : cuts.sets) {
    for (const auto e : cs.events) {
      if (seen[e]++) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random-document corpus
// ---------------------------------------------------------------------------

struct CorpusOptions {
  int min_components = 1;
  int max_components = 5;
  double edge_probability = 0.4;
  // When set, roughly half the suppliers carry a trust value.
  bool with_trust = false;
};

// Small random system: forward-only dependency edges keep the graph
// acyclic, components may share suppliers (that is where common-cause
// structure comes from), and up to two owner groups exist. Risks are drawn
// from the 1/1000 grid in [0.005, 0.03] so probability gaps stay far above
// double rounding error. At most 5 + 5 + 2 = 12 events, small enough for
// the 2^n oracles.
inline GraphDocument random_document(std::mt19937& rng,
                                     const CorpusOptions& opts = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> risk_grid(5, 30);  // value / 1000
  auto risk = [&] { return risk_grid(rng) / 1000.0; };

  std::uniform_int_distribution<int> comp_count(opts.min_components,
                                                opts.max_components);
  const int n_comps = comp_count(rng);
  std::uniform_int_distribution<int> supp_count(1, n_comps);
  const int n_supps = supp_count(rng);
  std::uniform_int_distribution<int> owner_count(0, 2);
  const int n_owners = owner_count(rng);

  GraphDocument doc;
  doc.root = "c0";

  for (int i = 0; i < n_owners; ++i) {
    doc.owners.push_back(own("o" + std::to_string(i), risk()));
  }

  std::uniform_int_distribution<int> owner_pick(0, n_owners > 0 ? n_owners - 1 : 0);
  std::uniform_int_distribution<int> trust_grid(20, 100);  // value / 100
  for (int i = 0; i < n_supps; ++i) {
    SupplierRecord s = supp("s" + std::to_string(i), risk());
    if (n_owners > 0 && unit(rng) < 0.5) {
      s.owner = "o" + std::to_string(owner_pick(rng));
    }
    if (opts.with_trust && unit(rng) < 0.5) {
      s.trust = trust_grid(rng) / 100.0;
    }
    doc.suppliers.push_back(std::move(s));
  }

  std::uniform_int_distribution<int> supp_pick(0, n_supps - 1);
  for (int i = 0; i < n_comps; ++i) {
    std::vector<std::string> deps;
    for (int j = i + 1; j < n_comps; ++j) {
      if (unit(rng) < opts.edge_probability) deps.push_back("c" + std::to_string(j));
    }
    const char* gate = unit(rng) < 0.5 ? "and" : "or";
    doc.components.push_back(comp("c" + std::to_string(i),
                                  "s" + std::to_string(supp_pick(rng)), risk(),
                                  gate, std::move(deps)));
  }
  return doc;
}

}  // namespace riots::testing
