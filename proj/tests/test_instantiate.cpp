#include <doctest.h>

#include "routeway/instantiate.hpp"
#include "support/gen.hpp"

using namespace routeway;
using testsupport::free_trail;
using testsupport::unit;
using testsupport::wp;

namespace {

Trail scaling_trail() {
  Trail t;
  t.id = "P";
  t.statement = "multiplying both sides of an inequality by a positive c preserves it";
  t.params = {"x", "y", "c"};
  t.hypotheses = {"c>0"};
  t.premise = std::vector<std::string>{"x<y", "c>0"};
  t.conclusion = std::vector<std::string>{"cx<cy"};
  return t;
}

}  // namespace

TEST_CASE("instantiating the scaling trail reproduces the instance texts") {
  Trail p = scaling_trail();
  Substitution s{{{"x", "a"}, {"y", "b"}, {"c", "2"}}};
  RouteUnit u = instantiate_unit(p, s);
  CHECK(u.initial.statements == std::vector<std::string>{"a<b", "2>0"});
  CHECK(u.terminal.statements == std::vector<std::string>{"2a<2b"});
  REQUIRE(u.trail);
  CHECK(u.trail->id == "P");
  CHECK(u.substitution == s);

  SUBCASE("identity substitution returns the templates verbatim") {
    Substitution id{{{"x", "x"}, {"y", "y"}, {"c", "c"}}};
    RouteUnit v = instantiate_unit(p, id);
    CHECK(v.initial.statements == *p.premise);
    CHECK(v.terminal.statements == *p.conclusion);
  }
  SUBCASE("binding errors are precise") {
    CHECK_THROWS_AS(instantiate_unit(p, Substitution{{{"x", "a"}}}), Error);
    try {
      instantiate_unit(p, Substitution{{{"x", "a"}, {"y", "b"}, {"c", "2"}, {"zz", "1"}}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "extra-binding");
    }
    try {
      instantiate_unit(p, Substitution{{{"x", ""}, {"y", "b"}, {"c", "2"}}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "invalid-substitution");
    }
  }
  SUBCASE("a template-less trail cannot be instantiated") {
    try {
      instantiate_unit(free_trail("Q"), Substitution{});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "no-templates");
    }
  }
}

TEST_CASE("routeway simulation specializes every unit") {
  Trail p = scaling_trail();
  // template routeway: the general scaling step cited as-is
  Routeway tmpl =
      Routeway::single(unit(Waypoint{"", {"x<y", "c>0"}, std::nullopt},
                            Waypoint{"", {"cx<cy"}, std::nullopt}, p));
  Substitution s{{{"x", "a"}, {"y", "b"}, {"c", "2"}}};

  SUBCASE("all hypotheses held makes a valid driving simulation") {
    auto result = instantiate_routeway(tmpl, s, {{"c>0", true}});
    CHECK(result.verdict == SimulationVerdict::Valid);
    REQUIRE(result.routeway.length() == 1);
    CHECK(result.routeway.start().statements == std::vector<std::string>{"a<b", "2>0"});
    CHECK(result.routeway.end().statements == std::vector<std::string>{"2a<2b"});
    REQUIRE(result.hypothesis_status.size() == 1);
    CHECK(result.hypothesis_status[0].hypothesis == "c>0");
    CHECK(result.hypothesis_status[0].holds);
    // a valid simulation stays irreducible wherever its trail is atomic
    BaseField field{"B", {"P"}, std::nullopt};
    CHECK(is_irreducible_routeway(result.routeway, field));
  }
  SUBCASE("a failed hypothesis leaves the verdict inconclusive") {
    Substitution neg{{{"x", "a"}, {"y", "b"}, {"c", "-1"}}};
    auto result = instantiate_routeway(tmpl, neg, {{"c>0", false}});
    CHECK(result.verdict == SimulationVerdict::Inconclusive);
    CHECK(result.routeway.end().statements == std::vector<std::string>{"-1a<-1b"});
  }
  SUBCASE("hypotheses must be declared") {
    CHECK_THROWS_AS(instantiate_routeway(tmpl, s, {}), Error);
  }
  SUBCASE("bindings must cover the free parameters") {
    CHECK_THROWS_AS(instantiate_routeway(tmpl, Substitution{{{"x", "a"}}}, {{"c>0", true}}),
                    Error);
  }
  SUBCASE("declared invalidity only upgrades a valid simulation") {
    auto valid = instantiate_routeway(tmpl, s, {{"c>0", true}});
    apply_declared_invalidity(valid, true);
    CHECK(valid.verdict == SimulationVerdict::RefutesGeneral);

    auto unmet = instantiate_routeway(tmpl, s, {{"c>0", false}});
    apply_declared_invalidity(unmet, true);
    CHECK(unmet.verdict == SimulationVerdict::Inconclusive);

    auto untouched = instantiate_routeway(tmpl, s, {{"c>0", true}});
    apply_declared_invalidity(untouched, false);
    CHECK(untouched.verdict == SimulationVerdict::Valid);
  }
}

TEST_CASE("inconsistent shared bindings break the chain") {
  // two template units meet at waypoint "u"; their templates bind it to
  // different parameters, so a substitution can tear the seam apart
  Trail first;
  first.id = "T1";
  first.params = {"x"};
  first.premise = std::vector<std::string>{"start"};
  first.conclusion = std::vector<std::string>{"x"};
  Trail second;
  second.id = "T2";
  second.params = {"y"};
  second.premise = std::vector<std::string>{"y"};
  second.conclusion = std::vector<std::string>{"finish"};

  Waypoint start = wp("", "start"), mid = wp("", "u"), finish = wp("", "finish");
  Routeway tmpl = Routeway::make({unit(start, mid, first), unit(mid, finish, second)});

  auto ok = instantiate_routeway(tmpl, Substitution{{{"x", "1"}, {"y", "1"}}}, {});
  CHECK(ok.routeway.length() == 2);
  try {
    instantiate_routeway(tmpl, Substitution{{{"x", "1"}, {"y", "2"}}}, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "broken-chain-after-substitution");
  }
}

TEST_CASE("simulation rewrites text units and keeps annotations") {
  Trail q = free_trail("Q");  // no templates: waypoint texts are rewritten
  q.params = {"n"};
  Waypoint from{"", {"n is even"}, std::nullopt};
  Waypoint to{"", {"n^2 is even"}, std::nullopt};
  RouteUnit step = unit(from, to, q);
  step.substitution = Substitution{{{"n", "6"}}};  // already specialized
  step.compass = "squares preserve parity";
  RouteUnit loose = unit(to, Waypoint{"", {"n^2 is divisible by 4"}, std::nullopt}, q);

  Routeway tmpl = Routeway::make({step, loose});
  auto result = instantiate_routeway(tmpl, Substitution{{{"n", "6"}}}, {});
  CHECK(result.routeway.units()[0].compass == std::string("squares preserve parity"));
  CHECK(result.routeway.units()[0].initial.statements ==
        std::vector<std::string>{"6 is even"});
  CHECK(result.routeway.units()[1].terminal.statements ==
        std::vector<std::string>{"6^2 is divisible by 4"});
  // parameter-free text passes through unchanged
  CHECK(substitute_params("6 is even", {{"n", "7"}}) == "6 is even");
}

TEST_CASE("counterexample detector follows the contrapositive guard") {
  Trail p = scaling_trail();
  Substitution s{{{"x", "a"}, {"y", "b"}, {"c", "-1"}}};

  auto verdict = [&](bool hyp, bool invalid) {
    return detect_counterexample(p, s, {{"c>0", hyp}}, invalid);
  };

  CHECK(verdict(true, true).refutes_general);
  CHECK_FALSE(verdict(true, false).refutes_general);
  CHECK(verdict(true, false).reason == NoRefutationReason::InstanceValid);
  CHECK_FALSE(verdict(false, true).refutes_general);
  CHECK(verdict(false, true).reason == NoRefutationReason::HypothesisNotSatisfied);
  CHECK_FALSE(verdict(false, false).refutes_general);
  CHECK(verdict(false, false).reason == NoRefutationReason::HypothesisNotSatisfied);

  CHECK(to_string(verdict(true, true)) == "refutes-general");
  CHECK_THROWS_AS(detect_counterexample(p, s, {}, true), Error);
}
