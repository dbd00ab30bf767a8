#include "riots/trust.hpp"

#include <algorithm>
#include <iterator>

namespace riots {

double jaccard_trust(const FunctionSet& specified, const FunctionSet& actual) {
  if (specified.empty() && actual.empty()) {
    throw Error(ErrorKind::EmptyUniverse,
                "trust is undefined when specified and actual are both empty");
  }
  std::vector<std::string> common;
  std::set_intersection(specified.begin(), specified.end(), actual.begin(),
                        actual.end(), std::back_inserter(common));
  std::vector<std::string> all;
  std::set_union(specified.begin(), specified.end(), actual.begin(), actual.end(),
                 std::back_inserter(all));
  return static_cast<double>(common.size()) / static_cast<double>(all.size());
}

double apply_trust(double direct_risk, double trust) {
  if (!(direct_risk >= 0.0 && direct_risk <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "risk must lie in [0,1]");
  }
  if (!(trust >= 0.0 && trust <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "trust must lie in [0,1]");
  }
  // Arranged so the boundary identities hold without rounding residue:
  // full trust is a no-op, zero trust is certainty, and the result never
  // drops below the undiscounted risk.
  if (trust == 0.0) return 1.0;
  const double raised = direct_risk + (1.0 - direct_risk) * (1.0 - trust);
  return raised > 1.0 ? 1.0 : raised;
}

std::vector<double> effective_risk_assignment(const SystemGraph& graph) {
  const auto events = basic_events(graph);
  std::vector<double> r;
  r.reserve(events.size());
  for (const auto& ev : events) {
    double value = ev.probability;
    if (ev.kind == EventKind::ComponentDirect) {
      const Component* c = graph.find_component(ev.node);
      const Supplier* s = c ? graph.find_supplier(c->supplier) : nullptr;
      if (s && s->trust) value = apply_trust(value, *s->trust);
    }
    r.push_back(value);
  }
  return r;
}

}  // namespace riots
