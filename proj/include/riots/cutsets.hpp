#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riots/graph.hpp"

namespace riots {

// Monotone boolean failure function over basic events, stored as a flat
// arena of nodes. Leaves reference the canonical event table by index;
// gates never have fewer than two children (single-child gates collapse).
struct FailureExpr {
  enum class NodeKind : std::uint8_t { Leaf, And, Or };

  struct Node {
    NodeKind kind = NodeKind::Leaf;
    std::uint32_t event = 0;              // Leaf only
    std::vector<std::uint32_t> children;  // And / Or only
  };

  std::vector<Node> nodes;
  std::uint32_t root = 0;
  std::vector<BasicEvent> events;

  const Node& root_node() const { return nodes[root]; }
  std::optional<std::uint32_t> event_index(const std::string& event_id) const;
  // Indices of events referenced by at least one leaf, ascending.
  std::vector<std::uint32_t> support() const;
};

// Compiles a flat, valid graph into its failure expression. Shared
// dependencies and shared suppliers or owners appear once in the event
// table and are referenced wherever they matter, which is what makes
// common-cause effects visible to the cutset enumeration.
FailureExpr compile_failure_logic(const SystemGraph& graph);

struct CutSet {
  std::vector<std::uint32_t> events;  // sorted indices into the event table
  bool operator==(const CutSet&) const = default;
};

struct CutSetCollection {
  // Canonical order: by size, then lexicographically by event indices
  // (equivalently by event ids, since the table is sorted).
  std::vector<CutSet> sets;
  std::vector<BasicEvent> events;  // copy of the expression's event table
  bool truncated = false;          // some sets dropped by max_order
  std::optional<std::size_t> max_order;
};

struct CutsetOptions {
  std::optional<std::size_t> max_order;
  // Abort with Exploded when an intermediate family would exceed this.
  std::size_t intermediate_cap = 1'000'000;
};

// Top-down enumeration: OR gates union their children's families, AND
// gates take the cartesian merge, and dominated (superset) sets are
// absorbed after every step so each intermediate family stays minimal.
CutSetCollection minimal_cutsets(const FailureExpr& expr,
                                 const CutsetOptions& opts = {});

// True iff firing exactly the named events (all others quiet) fails the
// system. Unknown event ids raise UnknownEvent.
bool is_cut(const FailureExpr& expr, const std::vector<std::string>& events);

}  // namespace riots
