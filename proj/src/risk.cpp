#include "riots/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace riots {

const char* to_string(RiskBackend backend) {
  return backend == RiskBackend::Exact ? "exact" : "mincut-approx";
}

RiskAssignment assignment_from_map(const std::vector<BasicEvent>& events,
                                   const std::map<std::string, double>& by_id) {
  std::set<std::string> known;
  for (const auto& ev : events) known.insert(ev.id);
  for (const auto& [id, value] : by_id) {
    (void)value;
    if (!known.count(id)) {
      throw Error(ErrorKind::UnknownEvent, "no basic event \"" + id + "\"");
    }
  }
  RiskAssignment r;
  r.reserve(events.size());
  for (const auto& ev : events) {
    auto it = by_id.find(ev.id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::MissingEventProbability,
                  "no probability for event \"" + ev.id + "\"");
    }
    r.push_back(it->second);
  }
  return r;
}

std::map<std::string, double> map_from_assignment(
    const std::vector<BasicEvent>& events, std::span<const double> r) {
  if (events.size() != r.size()) {
    throw Error(ErrorKind::MissingEventProbability,
                "assignment length does not match the event table");
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < events.size(); ++i) out[events[i].id] = r[i];
  return out;
}

namespace {

void check_assignment(std::size_t expected, std::span<const double> r) {
  if (r.size() != expected) {
    std::ostringstream msg;
    msg << "assignment holds " << r.size() << " probabilities for " << expected
        << " events";
    throw Error(ErrorKind::MissingEventProbability, msg.str());
  }
  for (const double v : r) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::OutOfRange, "event probabilities must lie in [0,1]");
    }
  }
}

}  // namespace

double cutset_probability(const CutSet& cs, std::span<const double> r) {
  double prod = 1.0;
  for (const auto e : cs.events) prod *= r[e];
  if (prod > 0.0 && prod < 1e-300) {
    // Rebuild in log space so long products keep their magnitude instead
    // of draining through the subnormal range.
    double lg = 0.0;
    for (const auto e : cs.events) lg += std::log(r[e]);
    prod = std::exp(lg);
  }
  return prod;
}

double system_risk_mincut(const CutSetCollection& cuts, std::span<const double> r) {
  check_assignment(cuts.events.size(), r);
  double survive = 1.0;
  for (const auto& cs : cuts.sets) survive *= 1.0 - cutset_probability(cs, r);
  return 1.0 - survive;
}

namespace {

// Simplified expression used by the exact evaluator. Children are kept
// sorted and deduplicated by their canonical form, so structurally equal
// sub-expressions share one canonical string and one memo entry.
struct RExpr {
  enum Kind : std::uint8_t { False, True, Leaf, And, Or };
  Kind kind = False;
  std::uint32_t event = 0;
  std::vector<RExpr> kids;
  std::string canon;
};

RExpr make_const(bool value) {
  RExpr e;
  e.kind = value ? RExpr::True : RExpr::False;
  e.canon = value ? "1" : "0";
  return e;
}

RExpr make_leaf(std::uint32_t event) {
  RExpr e;
  e.kind = RExpr::Leaf;
  e.event = event;
  e.canon = "e" + std::to_string(event);
  return e;
}

RExpr make_gate(bool conjunction, std::vector<RExpr> kids) {
  std::vector<RExpr> flat;
  for (auto& kid : kids) {
    if (kid.kind == RExpr::True) {
      if (conjunction) continue;
      return make_const(true);
    }
    if (kid.kind == RExpr::False) {
      if (conjunction) return make_const(false);
      continue;
    }
    flat.push_back(std::move(kid));
  }
  if (flat.empty()) return make_const(conjunction);
  std::sort(flat.begin(), flat.end(),
            [](const RExpr& a, const RExpr& b) { return a.canon < b.canon; });
  flat.erase(std::unique(flat.begin(), flat.end(),
                         [](const RExpr& a, const RExpr& b) {
                           return a.canon == b.canon;
                         }),
             flat.end());
  if (flat.size() == 1) return std::move(flat.front());

  RExpr e;
  e.kind = conjunction ? RExpr::And : RExpr::Or;
  e.canon = conjunction ? "A(" : "O(";
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i) e.canon += ',';
    e.canon += flat[i].canon;
  }
  e.canon += ')';
  e.kids = std::move(flat);
  return e;
}

RExpr from_arena(const FailureExpr& expr, std::uint32_t index) {
  const auto& node = expr.nodes[index];
  if (node.kind == FailureExpr::NodeKind::Leaf) return make_leaf(node.event);
  std::vector<RExpr> kids;
  kids.reserve(node.children.size());
  for (const auto child : node.children) kids.push_back(from_arena(expr, child));
  return make_gate(node.kind == FailureExpr::NodeKind::And, std::move(kids));
}

RExpr restrict_expr(const RExpr& f, std::uint32_t var, bool value) {
  switch (f.kind) {
    case RExpr::False:
    case RExpr::True:
      return f;
    case RExpr::Leaf:
      return f.event == var ? make_const(value) : f;
    case RExpr::And:
    case RExpr::Or: {
      std::vector<RExpr> kids;
      kids.reserve(f.kids.size());
      for (const auto& kid : f.kids) kids.push_back(restrict_expr(kid, var, value));
      return make_gate(f.kind == RExpr::And, std::move(kids));
    }
  }
  return make_const(false);
}

// Shannon decomposition pinning one support variable per level, in
// ascending event order, with no short-circuiting: constants keep being
// conditioned on the remaining variables. That makes the arithmetic a pure
// function of (level, simplified expression), so memoized values are
// reproducible regardless of visit order.
class ShannonEvaluator {
 public:
  ShannonEvaluator(const RExpr& root, const std::vector<std::uint32_t>& support,
                   std::span<const double> r)
      : support_(support), r_(r) {
    root_ = &root;
  }

  double run() { return descend(*root_, 0); }

 private:
  double descend(const RExpr& f, std::size_t level) {
    if (level == support_.size()) return f.kind == RExpr::True ? 1.0 : 0.0;
    std::string key = f.canon;
    key += '@';
    key += std::to_string(level);
    auto cached = memo_.find(key);
    if (cached != memo_.end()) return cached->second;

    const std::uint32_t var = support_[level];
    const double p = r_[var];
    const double q = 1.0 - p;
    const RExpr f0 = restrict_expr(f, var, false);
    const RExpr f1 = restrict_expr(f, var, true);
    const double value = q * descend(f0, level + 1) + p * descend(f1, level + 1);
    memo_.emplace(std::move(key), value);
    return value;
  }

  const RExpr* root_;
  const std::vector<std::uint32_t>& support_;
  std::span<const double> r_;
  std::unordered_map<std::string, double> memo_;
};

}  // namespace

double system_risk_exact(const FailureExpr& expr, std::span<const double> r,
                         int exact_limit) {
  check_assignment(expr.events.size(), r);
  const auto support = expr.support();
  if (exact_limit < 0) exact_limit = 0;
  if (support.size() > static_cast<std::size_t>(exact_limit)) {
    std::ostringstream msg;
    msg << "support of " << support.size() << " events exceeds the exact limit of "
        << exact_limit;
    throw Error(ErrorKind::TooLarge, msg.str());
  }
  const RExpr root = from_arena(expr, expr.root);
  return ShannonEvaluator(root, support, r).run();
}

double ExactEvaluator::evaluate(std::span<const double> r) const {
  return system_risk_exact(*expr_, r, exact_limit_);
}

double MincutEvaluator::evaluate(std::span<const double> r) const {
  return system_risk_mincut(*cuts_, r);
}

namespace {

void check_event_index(const RiskEvaluator& eval, std::uint32_t event) {
  if (event >= eval.event_count()) {
    throw Error(ErrorKind::UnknownEvent,
                "event index " + std::to_string(event) + " is outside the table of " +
                    std::to_string(eval.event_count()) + " events");
  }
}

}  // namespace

double birnbaum(const RiskEvaluator& eval, std::span<const double> r,
                std::uint32_t event) {
  check_event_index(eval, event);
  check_assignment(eval.event_count(), r);
  RiskAssignment probe(r.begin(), r.end());
  probe[event] = 1.0;
  const double certain = eval.evaluate(probe);
  probe[event] = 0.0;
  const double impossible = eval.evaluate(probe);
  return certain - impossible;
}

double improvement_potential(const RiskEvaluator& eval, std::span<const double> r,
                             std::uint32_t event, double floor) {
  check_event_index(eval, event);
  check_assignment(eval.event_count(), r);
  if (!(floor >= 0.0 && floor <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "floor must lie in [0,1]");
  }
  if (floor > r[event]) {
    std::ostringstream msg;
    msg << "floor " << floor << " is above the current probability " << r[event]
        << " of event " << event;
    throw Error(ErrorKind::FloorAboveCurrent, msg.str());
  }
  const double base = eval.evaluate(r);
  RiskAssignment probe(r.begin(), r.end());
  probe[event] = floor;
  return base - eval.evaluate(probe);
}

ImportanceReport importance_report(const FailureExpr& expr,
                                   const CutSetCollection& cuts,
                                   std::span<const double> r,
                                   const ReportOptions& opts) {
  check_assignment(expr.events.size(), r);
  if (cuts.events.size() != expr.events.size()) {
    throw Error(ErrorKind::MissingEventProbability,
                "cutset collection and expression use different event tables");
  }
  if (!(opts.ip_floor >= 0.0 && opts.ip_floor <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "floor must lie in [0,1]");
  }

  RiskBackend backend;
  if (opts.backend) {
    backend = *opts.backend;
  } else {
    backend = expr.support().size() <= static_cast<std::size_t>(std::max(0, opts.exact_limit))
                  ? RiskBackend::Exact
                  : RiskBackend::MincutApprox;
  }

  const ExactEvaluator exact(expr, opts.exact_limit);
  const MincutEvaluator mincut(cuts);
  const RiskEvaluator& eval =
      backend == RiskBackend::Exact ? static_cast<const RiskEvaluator&>(exact)
                                    : static_cast<const RiskEvaluator&>(mincut);

  ImportanceReport report;
  report.backend = backend;
  report.system_risk = eval.evaluate(r);
  report.risk_is_lower_bound =
      backend == RiskBackend::MincutApprox && cuts.truncated;

  report.rows.reserve(expr.events.size());
  for (std::uint32_t i = 0; i < expr.events.size(); ++i) {
    ImportanceRow row;
    row.event_id = expr.events[i].id;
    row.kind = expr.events[i].kind;
    row.node = expr.events[i].node;
    row.risk = r[i];
    row.bi = birnbaum(eval, r, i);
    row.ip = improvement_potential(eval, r, i, std::min(opts.ip_floor, r[i]));
    report.rows.push_back(std::move(row));
  }

  // 1-based ranks, descending by value; ties fall back to the event id so
  // equal scores still rank deterministically.
  auto assign_ranks = [&](auto value_of, auto rank_of) {
    std::vector<std::size_t> order(report.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = value_of(report.rows[a]);
      const double vb = value_of(report.rows[b]);
      if (va != vb) return va > vb;
      return report.rows[a].event_id < report.rows[b].event_id;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      rank_of(report.rows[order[pos]]) = static_cast<int>(pos + 1);
    }
  };
  assign_ranks([](const ImportanceRow& row) { return row.bi; },
               [](ImportanceRow& row) -> int& { return row.bi_rank; });
  assign_ranks([](const ImportanceRow& row) { return row.ip; },
               [](ImportanceRow& row) -> int& { return row.ip_rank; });

  return report;
}

}  // namespace riots
