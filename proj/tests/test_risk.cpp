#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "riots/risk.hpp"
#include "riots/trust.hpp"

using namespace riots;
using namespace riots::testing;

namespace {

// OR(a, b) with the canonical two-event table; the cutsets are {{a}, {b}}.
FailureExpr two_singletons() {
  ExprBuilder b({"a", "b"});
  return b.finish(b.or_gate({b.leaf("a"), b.leaf("b")}));
}

// AND(a, b): one cutset {{a, b}}.
FailureExpr one_pair() {
  ExprBuilder b({"a", "b"});
  return b.finish(b.and_gate({b.leaf("a"), b.leaf("b")}));
}

}  // namespace

TEST_SUITE_BEGIN("risk");

TEST_CASE("cutset probability is the plain product") {
  ExprBuilder b({"y"});
  const auto expr = b.finish(b.leaf("y"));
  const auto cuts = minimal_cutsets(expr);
  REQUIRE(cuts.sets.size() == 1);
  const RiskAssignment r = {0.3};
  CHECK(cutset_probability(cuts.sets[0], r) == 0.3);

  const auto pair = minimal_cutsets(one_pair());
  REQUIRE(pair.sets.size() == 1);
  const RiskAssignment r2 = {0.1, 0.2};
  CHECK(cutset_probability(pair.sets[0], r2) ==
        doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("min-cut risk reproduces the reference figures") {
  // Single singleton cutset: R = 1 - (1 - r), which rounds to within one
  // ulp of r itself.
  ExprBuilder b({"y"});
  const auto single = minimal_cutsets(b.finish(b.leaf("y")));
  CHECK(system_risk_mincut(single, RiskAssignment{0.3}) ==
        doctest::Approx(0.3).epsilon(1e-15));

  // Two singletons: 1 - (1-0.1)(1-0.2) = 0.28.
  const auto both = minimal_cutsets(two_singletons());
  CHECK(system_risk_mincut(both, RiskAssignment{0.1, 0.2}) ==
        doctest::Approx(0.28).epsilon(1e-15));

  // Shared supplier next to a two-event product:
  // 1 - (1-0.05)(1-0.01) = 0.0595.
  ExprBuilder sb({"a_d", "b_d", "s"});
  const auto shared = sb.finish(sb.or_gate({
      sb.leaf("s"),
      sb.and_gate({sb.leaf("a_d"), sb.leaf("b_d")}),
  }));
  const auto cuts = minimal_cutsets(shared);
  const RiskAssignment r = {0.1, 0.1, 0.05};  // a_d, b_d, s
  CHECK(system_risk_mincut(cuts, r) == doctest::Approx(0.0595).epsilon(1e-15));
}

TEST_CASE("exact risk reproduces the reference figures") {
  ExprBuilder b({"a"});
  const auto leaf = b.finish(b.leaf("a"));
  CHECK(system_risk_exact(leaf, RiskAssignment{0.3}) == 0.3);
  CHECK(system_risk_exact(one_pair(), RiskAssignment{0.5, 0.5}) == 0.25);
}

TEST_CASE("an empty cutset collection carries zero risk") {
  const CutSetCollection empty;
  CHECK(system_risk_mincut(empty, RiskAssignment{}) == 0.0);
  CHECK(MincutEvaluator(empty).evaluate(RiskAssignment{}) == 0.0);
}

TEST_CASE("exact risk equals the enumeration oracle bit for bit") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 50; ++i) {
    CorpusOptions opts;
    opts.with_trust = (i % 3) == 0;
    const GraphDocument doc = random_document(rng, opts);
    const SystemGraph graph = build_graph(doc);
    const FailureExpr expr = compile_failure_logic(graph);
    const RiskAssignment r = effective_risk_assignment(graph);

    const double exact = system_risk_exact(expr, r);
    const double oracle = enumeration_risk(expr, r);
    CHECK(exact == oracle);  // identical rounding, no tolerance

    const ExactEvaluator eval(expr);
    CHECK(eval.evaluate(r) == oracle);
  }
}

TEST_CASE("min-cut risk bounds the exact risk from above") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 50; ++i) {
    const GraphDocument doc = random_document(rng);
    const SystemGraph graph = build_graph(doc);
    const FailureExpr expr = compile_failure_logic(graph);
    const auto cuts = minimal_cutsets(expr);
    const RiskAssignment r = effective_risk_assignment(graph);

    const double approx = system_risk_mincut(cuts, r);
    const double exact = system_risk_exact(expr, r);
    CHECK(approx >= exact - 1e-12);
    if (pairwise_disjoint(cuts)) {
      CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("both backends stay within the unit interval and grow with risk") {
  std::mt19937 rng(555);
  for (int i = 0; i < 30; ++i) {
    const GraphDocument doc = random_document(rng);
    const SystemGraph graph = build_graph(doc);
    const FailureExpr expr = compile_failure_logic(graph);
    const auto cuts = minimal_cutsets(expr);
    const RiskAssignment r = effective_risk_assignment(graph);

    const double exact = system_risk_exact(expr, r);
    const double approx = system_risk_mincut(cuts, r);
    CHECK(exact >= 0.0);
    CHECK(exact <= 1.0);
    CHECK(approx >= 0.0);
    CHECK(approx <= 1.0);

    // Raising any single probability never lowers the risk.
    std::uniform_int_distribution<std::size_t> pick(0, r.size() - 1);
    RiskAssignment bumped = r;
    bumped[pick(rng)] = 0.5;
    CHECK(system_risk_exact(expr, bumped) >= exact);
    CHECK(system_risk_mincut(cuts, bumped) >= approx);
  }
}

TEST_CASE("supports above the exact limit are refused") {
  std::vector<std::string> ids;
  for (int i = 0; i < 25; ++i) {
    ids.push_back("e" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  ExprBuilder b(ids);
  std::vector<std::uint32_t> leaves;
  for (const auto& id : ids) leaves.push_back(b.leaf(id));
  const auto expr = b.finish(b.or_gate(leaves));
  const RiskAssignment r(25, 0.01);

  try {
    system_risk_exact(expr, r);
    FAIL("expected the default limit to refuse 25 events");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
    CHECK(e.message().find("25") != std::string::npos);
  }

  // With the limit raised the value matches the min-cut closed form, which
  // is exact here because all cutsets are disjoint singletons.
  const double exact = system_risk_exact(expr, r, 25);
  const double closed = system_risk_mincut(minimal_cutsets(expr), r);
  CHECK(exact == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("birnbaum importance at the reference points") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.2};
  const ExactEvaluator exact(expr);
  const MincutEvaluator mincut(cuts);

  // R(1, 0.2) - R(0, 0.2) = 1 - 0.2.
  CHECK(birnbaum(exact, r, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(birnbaum(mincut, r, 0) == doctest::Approx(0.8).epsilon(1e-15));

  const auto pair_expr = one_pair();
  const auto pair_cuts = minimal_cutsets(pair_expr);
  const RiskAssignment rp = {0.3, 0.5};
  CHECK(birnbaum(ExactEvaluator(pair_expr), rp, 0) == 0.5);
  CHECK(birnbaum(MincutEvaluator(pair_cuts), rp, 0) == 0.5);
}

TEST_CASE("events outside every cutset have zero importance") {
  ExprBuilder b({"a", "b", "c"});
  const auto expr = b.finish(b.or_gate({b.leaf("a"), b.leaf("b")}));
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.2, 0.4};
  const std::uint32_t c = *expr.event_index("c");
  CHECK(birnbaum(ExactEvaluator(expr), r, c) == 0.0);
  CHECK(birnbaum(MincutEvaluator(cuts), r, c) == 0.0);
  CHECK(improvement_potential(ExactEvaluator(expr), r, c) == 0.0);
  CHECK(improvement_potential(MincutEvaluator(cuts), r, c) == 0.0);
}

TEST_CASE("improvement potential at the reference points") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.2};
  const ExactEvaluator exact(expr);
  const MincutEvaluator mincut(cuts);

  // 0.28 - 0.20 = 0.08.
  CHECK(improvement_potential(exact, r, 0) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(improvement_potential(mincut, r, 0) == doctest::Approx(0.08).epsilon(1e-15));

  // An event already at zero cannot improve anything.
  const RiskAssignment zero_a = {0.0, 0.2};
  CHECK(improvement_potential(exact, zero_a, 0) == 0.0);
  CHECK(improvement_potential(mincut, zero_a, 0) == 0.0);

  // A floor keeps part of the risk: 0.28 - 0.24 = 0.04.
  CHECK(improvement_potential(exact, r, 0, 0.05) ==
        doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("improvement potential rejects bad floors") {
  const auto expr = two_singletons();
  const ExactEvaluator exact(expr);
  const RiskAssignment r = {0.1, 0.2};
  auto kind_of = [&](double floor) {
    try {
      improvement_potential(exact, r, 0, floor);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;  // placeholder meaning "did not throw"
  };
  CHECK(kind_of(-0.1) == ErrorKind::OutOfRange);
  CHECK(kind_of(1.5) == ErrorKind::OutOfRange);
  CHECK(kind_of(0.15) == ErrorKind::FloorAboveCurrent);
}

TEST_CASE("importance identities hold on the random corpus") {
  std::mt19937 rng(8080);
  for (int i = 0; i < 30; ++i) {
    const GraphDocument doc = random_document(rng);
    const SystemGraph graph = build_graph(doc);
    const FailureExpr expr = compile_failure_logic(graph);
    const auto cuts = minimal_cutsets(expr);
    const RiskAssignment r = effective_risk_assignment(graph);
    const ExactEvaluator exact(expr);
    const MincutEvaluator mincut(cuts);

    for (std::uint32_t e = 0; e < r.size(); ++e) {
      const double bi = birnbaum(exact, r, e);
      const double ip = improvement_potential(exact, r, e);

      // Non-negative under both backends.
      CHECK(bi >= 0.0);
      CHECK(ip >= 0.0);
      CHECK(birnbaum(mincut, r, e) >= 0.0);
      CHECK(improvement_potential(mincut, r, e) >= 0.0);

      // The structure function is affine in each variable, so the floored
      // reduction is the probability times the derivative...
      CHECK(ip == doctest::Approx(r[e] * bi).epsilon(1e-12));

      // ...and any finite difference reproduces the derivative.
      RiskAssignment lo = r, hi = r;
      lo[e] = 0.25;
      hi[e] = 0.75;
      const double diff = (exact.evaluate(hi) - exact.evaluate(lo)) / 0.5;
      CHECK(diff == doctest::Approx(bi).epsilon(1e-12));
    }
  }
}

TEST_CASE("importance report ranks a two-event chain as derived") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.2};
  const ImportanceReport report = importance_report(expr, cuts, r);

  CHECK(report.backend == RiskBackend::Exact);
  CHECK_FALSE(report.risk_is_lower_bound);
  CHECK(report.system_risk == doctest::Approx(0.28).epsilon(1e-15));

  REQUIRE(report.rows.size() == 2);
  const auto& a = report.rows[0];
  const auto& b = report.rows[1];
  CHECK(a.event_id == "a");
  CHECK(b.event_id == "b");
  CHECK(a.bi == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(b.bi == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(a.ip == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(b.ip == doctest::Approx(0.18).epsilon(1e-15));
  // b is the more fragile event on both measures.
  CHECK(b.bi_rank == 1);
  CHECK(a.bi_rank == 2);
  CHECK(b.ip_rank == 1);
  CHECK(a.ip_rank == 2);
}

TEST_CASE("zero risks give zero system risk but defined importances") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.0, 0.0};
  const ImportanceReport report = importance_report(expr, cuts, r);
  CHECK(report.system_risk == 0.0);
  for (const auto& row : report.rows) {
    CHECK(row.bi == 1.0);  // every event alone takes the system down
    CHECK(row.ip == 0.0);
  }
}

TEST_CASE("tied importances rank deterministically by event id") {
  ExprBuilder b({"a", "b", "c"});
  const auto expr =
      b.finish(b.or_gate({b.leaf("a"), b.leaf("b"), b.leaf("c")}));
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.1, 0.1};
  const ImportanceReport report = importance_report(expr, cuts, r);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].bi_rank == 1);
  CHECK(report.rows[1].bi_rank == 2);
  CHECK(report.rows[2].bi_rank == 3);
  CHECK(report.rows[0].ip_rank == 1);
  CHECK(report.rows[1].ip_rank == 2);
  CHECK(report.rows[2].ip_rank == 3);
}

TEST_CASE("the backend is chosen by support size and can be forced") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);
  const RiskAssignment r = {0.1, 0.2};
  CHECK(importance_report(expr, cuts, r).backend == RiskBackend::Exact);

  ReportOptions force;
  force.backend = RiskBackend::MincutApprox;
  CHECK(importance_report(expr, cuts, r, force).backend ==
        RiskBackend::MincutApprox);

  const SystemGraph vehicle =
      build_graph(parse_document(fixture("autonomous_vehicle.json")));
  const FailureExpr big = compile_failure_logic(vehicle);
  const auto big_cuts = minimal_cutsets(big);
  const RiskAssignment big_r = effective_risk_assignment(vehicle);
  CHECK(big.events.size() == 33);
  CHECK(importance_report(big, big_cuts, big_r).backend ==
        RiskBackend::MincutApprox);

  ReportOptions exact_forced;
  exact_forced.backend = RiskBackend::Exact;
  CHECK_THROWS_AS(importance_report(big, big_cuts, big_r, exact_forced), Error);
}

TEST_CASE("a truncated min-cut report flags its risk as a lower bound") {
  const SystemGraph vehicle =
      build_graph(parse_document(fixture("autonomous_vehicle.json")));
  const FailureExpr expr = compile_failure_logic(vehicle);
  CutsetOptions copts;
  copts.max_order = 1;
  const auto cuts = minimal_cutsets(expr, copts);
  REQUIRE(cuts.truncated);
  const RiskAssignment r = effective_risk_assignment(vehicle);
  const ImportanceReport report = importance_report(expr, cuts, r);
  CHECK(report.backend == RiskBackend::MincutApprox);
  CHECK(report.risk_is_lower_bound);
}

TEST_CASE("assignments convert between map and dense forms") {
  const auto expr = two_singletons();
  const auto& events = expr.events;

  const RiskAssignment r =
      assignment_from_map(events, {{"a", 0.1}, {"b", 0.2}});
  CHECK(r == RiskAssignment{0.1, 0.2});
  CHECK(map_from_assignment(events, r) ==
        std::map<std::string, double>{{"a", 0.1}, {"b", 0.2}});

  try {
    assignment_from_map(events, {{"a", 0.1}});
    FAIL("expected a missing probability");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingEventProbability);
    CHECK(e.message().find("b") != std::string::npos);
  }

  try {
    assignment_from_map(events, {{"a", 0.1}, {"b", 0.2}, {"ghost", 0.3}});
    FAIL("expected an unknown event");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownEvent);
    CHECK(e.message().find("ghost") != std::string::npos);
  }
}

TEST_CASE("malformed assignments are rejected") {
  const auto expr = two_singletons();
  const auto cuts = minimal_cutsets(expr);

  auto kind_of = [&](const RiskAssignment& r) {
    try {
      system_risk_exact(expr, r);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;  // placeholder meaning "did not throw"
  };
  CHECK(kind_of({0.1}) == ErrorKind::MissingEventProbability);
  CHECK(kind_of({0.1, 1.5}) == ErrorKind::OutOfRange);
  CHECK(kind_of({0.1, std::nan("")}) == ErrorKind::OutOfRange);

  try {
    const RiskAssignment short_r{0.1};
    system_risk_mincut(cuts, short_r);
    FAIL("expected a missing probability");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingEventProbability);
  }
}

TEST_SUITE_END();
