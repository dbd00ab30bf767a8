#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riots/cutsets.hpp"

namespace riots {

// Probability per basic event, aligned with the canonical event table.
using RiskAssignment = std::vector<double>;

// Largest expression support the exact evaluator accepts by default.
inline constexpr int kDefaultExactLimit = 24;

// Converts a map keyed by event id into a dense assignment. Every event in
// the table must be covered (MissingEventProbability); keys that match no
// event raise UnknownEvent.
RiskAssignment assignment_from_map(const std::vector<BasicEvent>& events,
                                   const std::map<std::string, double>& by_id);
std::map<std::string, double> map_from_assignment(
    const std::vector<BasicEvent>& events, std::span<const double> r);

// Probability that every event of one cutset fires.
double cutset_probability(const CutSet& cs, std::span<const double> r);

// Upper-bound system risk from minimal cutsets:
//   R = 1 - prod_a (1 - prod_{y in a} r_y).
// Exact when the cutsets are pairwise disjoint; never below the exact
// probability. With a truncated collection the value is a lower bound of
// the untruncated formula.
double system_risk_mincut(const CutSetCollection& cuts, std::span<const double> r);

// Exact top-event probability by Shannon decomposition over the support,
// with memoization on the simplified sub-expression. Supports larger than
// exact_limit raise TooLarge.
double system_risk_exact(const FailureExpr& expr, std::span<const double> r,
                         int exact_limit = kDefaultExactLimit);

enum class RiskBackend { Exact, MincutApprox };

const char* to_string(RiskBackend backend);

class RiskEvaluator {
 public:
  virtual ~RiskEvaluator() = default;
  virtual double evaluate(std::span<const double> r) const = 0;
  virtual RiskBackend backend() const = 0;
  virtual std::size_t event_count() const = 0;
};

class ExactEvaluator final : public RiskEvaluator {
 public:
  explicit ExactEvaluator(const FailureExpr& expr,
                          int exact_limit = kDefaultExactLimit)
      : expr_(&expr), exact_limit_(exact_limit) {}
  double evaluate(std::span<const double> r) const override;
  RiskBackend backend() const override { return RiskBackend::Exact; }
  std::size_t event_count() const override { return expr_->events.size(); }

 private:
  const FailureExpr* expr_;
  int exact_limit_;
};

class MincutEvaluator final : public RiskEvaluator {
 public:
  explicit MincutEvaluator(const CutSetCollection& cuts) : cuts_(&cuts) {}
  double evaluate(std::span<const double> r) const override;
  RiskBackend backend() const override { return RiskBackend::MincutApprox; }
  std::size_t event_count() const override { return cuts_->events.size(); }

 private:
  const CutSetCollection* cuts_;
};

// Birnbaum importance: R with the event certain minus R with it impossible.
double birnbaum(const RiskEvaluator& eval, std::span<const double> r,
                std::uint32_t event);

// Risk reduction achievable by driving the event's probability down to
// `floor`: R(r) - R(r with r_event := floor). Requires 0 <= floor <= r_event.
double improvement_potential(const RiskEvaluator& eval, std::span<const double> r,
                             std::uint32_t event, double floor = 0.0);

struct ImportanceRow {
  std::string event_id;
  EventKind kind = EventKind::ComponentDirect;
  std::string node;
  double risk = 0.0;
  double bi = 0.0;
  double ip = 0.0;
  int bi_rank = 0;
  int ip_rank = 0;
  bool operator==(const ImportanceRow&) const = default;
};

struct ImportanceReport {
  double system_risk = 0.0;
  RiskBackend backend = RiskBackend::MincutApprox;
  // Set when the backend is mincut over a truncated collection: the
  // reported risk then only bounds the full formula from below.
  bool risk_is_lower_bound = false;
  std::vector<ImportanceRow> rows;  // canonical event order
};

struct ReportOptions {
  // Backend to force; by default exact is used when the support fits
  // within exact_limit and mincut otherwise.
  std::optional<RiskBackend> backend;
  int exact_limit = kDefaultExactLimit;
  // Per-event floor for improvement potential, clamped to each event's
  // own probability so events already below the floor report zero.
  double ip_floor = 0.0;
};

// System risk plus per-event Birnbaum and improvement-potential values and
// their dense 1-based ranks (descending by value, ties broken by event id).
ImportanceReport importance_report(const FailureExpr& expr,
                                   const CutSetCollection& cuts,
                                   std::span<const double> r,
                                   const ReportOptions& opts = {});

}  // namespace riots
