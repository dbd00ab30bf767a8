#include "riots/cutsets.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace riots {

std::optional<std::uint32_t> FailureExpr::event_index(const std::string& event_id) const {
  // The table is sorted by id, so a binary search suffices.
  auto it = std::lower_bound(events.begin(), events.end(), event_id,
                             [](const BasicEvent& e, const std::string& id) {
                               return e.id < id;
                             });
  if (it == events.end() || it->id != event_id) return std::nullopt;
  return static_cast<std::uint32_t>(it - events.begin());
}

std::vector<std::uint32_t> FailureExpr::support() const {
  std::vector<bool> seen(events.size(), false);
  for (const auto& node : nodes)
    if (node.kind == NodeKind::Leaf) seen[node.event] = true;
  std::vector<std::uint32_t> result;
  for (std::uint32_t i = 0; i < seen.size(); ++i)
    if (seen[i]) result.push_back(i);
  return result;
}

namespace {

class Compiler {
 public:
  explicit Compiler(const SystemGraph& graph) : graph_(graph) {
    expr_.events = basic_events(graph);
    for (std::uint32_t i = 0; i < expr_.events.size(); ++i)
      index_by_id_[expr_.events[i].id] = i;
    for (const auto& c : graph.components) components_[c.id] = &c;
    for (const auto& s : graph.suppliers) suppliers_[s.id] = &s;
  }

  FailureExpr run() {
    expr_.root = component_failure(graph_.root);
    return std::move(expr_);
  }

 private:
  std::uint32_t leaf(EventKind kind, const std::string& node_id) {
    const std::uint32_t event = index_by_id_.at(event_id_for(kind, node_id));
    auto [it, inserted] = leaf_cache_.try_emplace(event, 0);
    if (inserted) {
      expr_.nodes.push_back({FailureExpr::NodeKind::Leaf, event, {}});
      it->second = static_cast<std::uint32_t>(expr_.nodes.size() - 1);
    }
    return it->second;
  }

  std::uint32_t gate(FailureExpr::NodeKind kind, std::vector<std::uint32_t> children) {
    if (children.size() == 1) return children.front();
    expr_.nodes.push_back({kind, 0, std::move(children)});
    return static_cast<std::uint32_t>(expr_.nodes.size() - 1);
  }

  std::uint32_t component_failure(const std::string& id) {
    auto cached = component_cache_.find(id);
    if (cached != component_cache_.end()) return cached->second;

    const Component* c = components_.at(id);
    std::vector<std::uint32_t> causes;
    causes.push_back(leaf(EventKind::ComponentDirect, id));
    causes.push_back(leaf(EventKind::SupplierCompromise, c->supplier));
    const Supplier* s = suppliers_.at(c->supplier);
    if (s->owner) causes.push_back(leaf(EventKind::OwnerCompromise, *s->owner));

    if (!c->depends_on.empty()) {
      std::vector<std::uint32_t> deps;
      deps.reserve(c->depends_on.size());
      for (const auto& dep : c->depends_on) deps.push_back(component_failure(dep));
      causes.push_back(gate(c->gate == GateType::And ? FailureExpr::NodeKind::And
                                                     : FailureExpr::NodeKind::Or,
                            std::move(deps)));
    }

    const std::uint32_t node = gate(FailureExpr::NodeKind::Or, std::move(causes));
    component_cache_[id] = node;
    return node;
  }

  const SystemGraph& graph_;
  FailureExpr expr_;
  std::map<std::string, std::uint32_t> index_by_id_;
  std::map<std::string, const Component*> components_;
  std::map<std::string, const Supplier*> suppliers_;
  std::map<std::uint32_t, std::uint32_t> leaf_cache_;
  std::map<std::string, std::uint32_t> component_cache_;
};

}  // namespace

FailureExpr compile_failure_logic(const SystemGraph& graph) {
  if (!graph.is_flat()) {
    throw Error(ErrorKind::NotFlat,
                "failure logic requires a flat graph; call flatten first");
  }
  if (auto issues = validate_graph(graph, nullptr); !issues.empty()) {
    throw Error(ErrorKind::NotValidated,
                "graph fails validation: " + issues.front().message);
  }
  return Compiler(graph).run();
}

namespace {

using Family = std::vector<CutSet>;

bool cutset_less(const CutSet& a, const CutSet& b) {
  if (a.events.size() != b.events.size()) return a.events.size() < b.events.size();
  return a.events < b.events;
}

bool is_subset(const std::vector<std::uint32_t>& small,
               const std::vector<std::uint32_t>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Sorts by size and removes duplicates and supersets of kept sets, leaving
// a minimal antichain in canonical order.
void absorb(Family& family) {
  std::sort(family.begin(), family.end(), cutset_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());
  Family kept;
  kept.reserve(family.size());
  for (auto& candidate : family) {
    bool dominated = false;
    for (const auto& k : kept) {
      if (k.events.size() >= candidate.events.size()) break;
      if (is_subset(k.events, candidate.events)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(candidate));
  }
  family = std::move(kept);
}

struct Enumerator {
  const FailureExpr& expr;
  const CutsetOptions& opts;
  bool truncated = false;
  std::map<std::uint32_t, Family> cache;

  void check_cap(std::size_t projected) const {
    if (projected > opts.intermediate_cap) {
      std::ostringstream msg;
      msg << "intermediate cutset collection would hold " << projected
          << " sets, above the cap of " << opts.intermediate_cap;
      throw Error(ErrorKind::Exploded, msg.str());
    }
  }

  Family prune(Family family) {
    if (!opts.max_order) return family;
    Family kept;
    kept.reserve(family.size());
    for (auto& cs : family) {
      if (cs.events.size() <= *opts.max_order) {
        kept.push_back(std::move(cs));
      } else {
        truncated = true;
      }
    }
    return kept;
  }

  Family enumerate(std::uint32_t index) {
    auto cached = cache.find(index);
    if (cached != cache.end()) return cached->second;

    const auto& node = expr.nodes[index];
    Family result;
    switch (node.kind) {
      case FailureExpr::NodeKind::Leaf:
        result.push_back({{node.event}});
        break;
      case FailureExpr::NodeKind::Or: {
        for (const auto child : node.children) {
          Family sub = enumerate(child);
          check_cap(result.size() + sub.size());
          result.insert(result.end(), std::make_move_iterator(sub.begin()),
                        std::make_move_iterator(sub.end()));
          absorb(result);
        }
        break;
      }
      case FailureExpr::NodeKind::And: {
        result.push_back({{}});
        for (const auto child : node.children) {
          const Family sub = enumerate(child);
          check_cap(result.size() * sub.size());
          Family merged;
          merged.reserve(result.size() * sub.size());
          for (const auto& left : result) {
            for (const auto& right : sub) {
              CutSet u;
              u.events.reserve(left.events.size() + right.events.size());
              std::set_union(left.events.begin(), left.events.end(),
                             right.events.begin(), right.events.end(),
                             std::back_inserter(u.events));
              merged.push_back(std::move(u));
            }
          }
          merged = prune(std::move(merged));
          absorb(merged);
          result = std::move(merged);
        }
        break;
      }
    }
    result = prune(std::move(result));
    cache[index] = result;
    return result;
  }
};

}  // namespace

CutSetCollection minimal_cutsets(const FailureExpr& expr, const CutsetOptions& opts) {
  Enumerator enumerator{expr, opts, false, {}};
  Family sets = enumerator.enumerate(expr.root);
  absorb(sets);  // canonical order; families arrive already minimal

  CutSetCollection out;
  out.sets = std::move(sets);
  out.events = expr.events;
  out.truncated = enumerator.truncated;
  out.max_order = opts.max_order;
  return out;
}

namespace {

bool eval_node(const FailureExpr& expr, std::uint32_t index,
               const std::vector<bool>& fired) {
  const auto& node = expr.nodes[index];
  switch (node.kind) {
    case FailureExpr::NodeKind::Leaf:
      return fired[node.event];
    case FailureExpr::NodeKind::And:
      for (const auto child : node.children)
        if (!eval_node(expr, child, fired)) return false;
      return true;
    case FailureExpr::NodeKind::Or:
      for (const auto child : node.children)
        if (eval_node(expr, child, fired)) return true;
      return false;
  }
  return false;
}

}  // namespace

bool is_cut(const FailureExpr& expr, const std::vector<std::string>& events) {
  std::vector<bool> fired(expr.events.size(), false);
  for (const auto& id : events) {
    const auto index = expr.event_index(id);
    if (!index) {
      throw Error(ErrorKind::UnknownEvent, "no basic event \"" + id + "\"");
    }
    fired[*index] = true;
  }
  return eval_node(expr, expr.root, fired);
}

}  // namespace riots
