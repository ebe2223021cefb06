#include <doctest.h>

#include <fstream>
#include <sstream>

#include "routeway/dsl.hpp"
#include "support/gen.hpp"

using namespace routeway;
namespace d = routeway::dsl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string fixture(const std::string& name) { return slurp(std::string(FIXTURE_DIR) + "/" + name); }

d::Document parse_ok(const std::string& source) {
  auto result = d::parse(source);
  for (const auto& diag : result.diagnostics) {
    INFO(d::format(diag));
    CHECK_FALSE(d::is_error(diag));
  }
  REQUIRE(result.ok());
  return std::move(*result.document);
}

std::size_t count_code(const std::vector<d::Diagnostic>& diags, const std::string& code) {
  std::size_t n = 0;
  for (const auto& diag : diags)
    if (diag.code == code) ++n;
  return n;
}

std::size_t count_errors(const std::vector<d::Diagnostic>& diags) {
  std::size_t n = 0;
  for (const auto& diag : diags)
    if (d::is_error(diag)) ++n;
  return n;
}

}  // namespace

TEST_CASE("the group fixture parses into the expected shape") {
  d::Document doc = parse_ok(fixture("group.rwy"));
  CHECK(doc.basefields().size() == 1);
  CHECK(doc.trails().size() == 3);
  CHECK(doc.waypoints().size() == 4);
  CHECK(doc.routeways().size() == 1);

  const d::RoutewayDecl* main = doc.find_routeway("main");
  REQUIRE(main);
  CHECK(main->units.size() == 3);  // the chained line splits into three units
  CHECK(main->units[1].initial == "W_iso");

  const BaseField* field = doc.find_basefield("B1");
  REQUIRE(field);
  CHECK(field->trails == std::set<std::string>{"P1", "P2", "P3"});

  CHECK(d::lint(doc).empty() == false);  // template-less trails warn
  CHECK(count_errors(d::lint(doc)) == 0);
}

TEST_CASE("defective units parse and lint as defective") {
  d::Document doc = parse_ok(fixture("defective.rwy"));
  auto units = doc.all_units();
  REQUIRE(units.size() == 1);
  CHECK(is_defective(units[0]));

  auto diags = d::lint(doc);
  CHECK(count_code(diags, "DEFECTIVE_UNIT") == 1);
  CHECK(count_errors(diags) == 1);
}

TEST_CASE("unresolved references carry the offending line") {
  std::string source = R"(basefield B { }
waypoint A: "a"
waypoint B2: "b"
routeway r in B from A to B2 {
  A =[P9]=> B2
}
)";
  auto result = d::parse(source);
  CHECK_FALSE(result.ok());
  REQUIRE(count_code(result.diagnostics, "unresolved-reference") == 1);
  const auto& diag = result.diagnostics.front();
  CHECK(diag.where.line == 5);
  CHECK(diag.message.find("P9") != std::string::npos);
}

TEST_CASE("duplicate identifiers are rejected per namespace") {
  auto result = d::parse("waypoint A: \"one\"\nwaypoint A: \"two\"\n");
  CHECK_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, "duplicate-identifier") == 1);

  // the same name in different namespaces is fine
  auto ok = d::parse("basefield A { }\nwaypoint A: \"statement\"\n");
  CHECK(ok.ok());
}

TEST_CASE("extends cycles are reported") {
  auto result = d::parse("basefield A extends B { }\nbasefield B extends A { }\n");
  CHECK_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, "circular-extends") >= 1);
}

TEST_CASE("lint rules fire exactly where intended") {
  SUBCASE("REDUCIBLE_UNIT when the trail is outside the routeway's field") {
    d::Document doc = parse_ok(fixture("inequality.rwy"));
    // the shortcut X2 cited under the elementary field is reducible there
    std::string source = d::serialize(doc);
    source += "\nrouteway misplaced in B_elem from W_ab to W_2a2b {\n"
              "  W_ab =[X2 with x=:a, y=:b]=> W_2a2b\n}\n";
    auto reparsed = d::parse(source);
    REQUIRE(reparsed.ok());
    auto diags = d::lint(*reparsed.document);
    CHECK(count_code(diags, "REDUCIBLE_UNIT") == 1);
    // while the original document has no errors at all
    CHECK(count_errors(d::lint(doc)) == 0);
  }
  SUBCASE("TEMPLATE_MISMATCH on a substitution that misses the templates") {
    std::string source = R"(basefield B {
  trail X2(x, y) {
    premise: "x<y"
    conclusion: "2x<2y"
  }
}
waypoint A: "a<b"
waypoint C: "3a<3b"
routeway r in B from A to C {
  A =[X2 with x=:a, y=:b]=> C
}
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());
    CHECK(count_code(d::lint(*result.document), "TEMPLATE_MISMATCH") == 1);
  }
  SUBCASE("TEMPLATE_MISMATCH when the substitution misses parameters") {
    std::string source = R"(basefield B {
  trail X2(x, y) {
    premise: "x<y"
    conclusion: "2x<2y"
  }
}
waypoint A: "a<b"
waypoint C: "2a<2b"
routeway r in B from A to C {
  A =[X2 with x=:a]=> C
}
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());
    CHECK(count_code(d::lint(*result.document), "TEMPLATE_MISMATCH") == 1);
  }
  SUBCASE("BROKEN_CHAIN between mismatched consecutive units") {
    std::string source = R"(basefield B { trail P: "p" }
waypoint A: "a"
waypoint B2: "b"
waypoint C: "c"
waypoint D: "d"
routeway r in B from A to D {
  A =[P]=> B2
  C =[P]=> D
}
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());
    auto diags = d::lint(*result.document);
    CHECK(count_code(diags, "BROKEN_CHAIN") == 1);
  }
  SUBCASE("BROKEN_CHAIN against the declared endpoints") {
    std::string source = R"(basefield B { trail P: "p" }
waypoint A: "a"
waypoint B2: "b"
waypoint C: "c"
routeway r in B from A to C {
  A =[P]=> B2
}
routeway empty_bad in B from A to C { }
routeway empty_ok in B from A to A { }
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());
    auto diags = d::lint(*result.document);
    CHECK(count_code(diags, "BROKEN_CHAIN") == 2);  // wrong last unit + bad empty routeway
  }
  SUBCASE("UNVERIFIABLE_SINGLE_APPLICATION only for template-less trails in field") {
    d::Document group = parse_ok(fixture("group.rwy"));
    auto diags = d::lint(group);
    CHECK(count_code(diags, "UNVERIFIABLE_SINGLE_APPLICATION") == 3);
    d::Document ineq = parse_ok(fixture("inequality.rwy"));
    CHECK(count_code(d::lint(ineq), "UNVERIFIABLE_SINGLE_APPLICATION") == 0);
  }
  SUBCASE("UNUSED_TRAIL for trails no unit cites") {
    std::string source = R"(basefield B { trail P: "p" trail Q: "q" }
waypoint A: "a"
waypoint B2: "b"
routeway r in B from A to B2 {
  A =[P]=> B2
}
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());
    auto diags = d::lint(*result.document);
    CHECK(count_code(diags, "UNUSED_TRAIL") == 1);
    CHECK(count_errors(diags) == 0);
  }
  SUBCASE("the school fixture is lint-clean apart from warnings") {
    d::Document doc = parse_ok(fixture("school.rwy"));
    CHECK(count_errors(d::lint(doc)) == 0);
  }
  SUBCASE("diagnostics are stable across runs") {
    std::string source = fixture("defective.rwy");
    auto r1 = d::parse(source);
    auto r2 = d::parse(source);
    REQUIRE(r1.ok());
    REQUIRE(r2.ok());
    auto d1 = d::lint(*r1.document);
    auto d2 = d::lint(*r2.document);
    REQUIRE(d1.size() == d2.size());
    for (std::size_t i = 0; i < d1.size(); ++i) {
      CHECK(d1[i].code == d2[i].code);
      CHECK(d1[i].where.line == d2[i].where.line);
      CHECK(d1[i].where.column == d2[i].where.column);
      CHECK(d1[i].message == d2[i].message);
    }
  }
}

TEST_CASE("documents round-trip through serialize and parse") {
  for (const char* name :
       {"group.rwy", "defective.rwy", "school.rwy", "inequality.rwy", "finite_field.rwy"}) {
    CAPTURE(name);
    d::Document doc = parse_ok(fixture(name));
    std::string text = d::serialize(doc);
    auto reparsed = d::parse(text);
    REQUIRE_MESSAGE(reparsed.ok(), "serialized " << name << " failed to reparse");
    CHECK(*reparsed.document == doc);
    // and serialization is a fixed point from there on
    CHECK(d::serialize(*reparsed.document) == text);
  }

  SUBCASE("two-way arrows survive the trip") {
    d::Document doc = parse_ok(fixture("finite_field.rwy"));
    std::string text = d::serialize(doc);
    CHECK(text.find("<=[def_ma]=>") != std::string::npos);
    const d::RoutewayDecl* main = doc.find_routeway("main");
    REQUIRE(main);
    CHECK(main->units[1].two_way);
    CHECK_FALSE(main->units[0].two_way);
  }
  SUBCASE("empty documents serialize to nothing and back") {
    d::Document empty;
    empty.finalize();
    CHECK(d::serialize(empty).empty());
    auto reparsed = d::parse("");
    REQUIRE(reparsed.ok());
    CHECK(*reparsed.document == empty);
  }
  SUBCASE("syntax corners round-trip") {
    std::string source = R"(basefield B' extends B0 {
  trail R'(alpha, beta) {
    statement: "primed and parameterized"
    requires: "alpha > 0", "beta > 0", "alpha != beta"
    premise: ("alpha < beta", "alpha > 0", "beta > 0")
    conclusion: "alpha^2 < beta^2"
  }
}
basefield B0 { }
waypoint W1: ("one", "two", "three")
waypoint W2: "target" display "shown instead"
routeway r' in B' from W1 to W2 {
  W1 <=> W2 @ "defective but two-way"
}
routeway r2 in B' from W1 to W2 {
  W1 =[R' with alpha=:"n + 1", beta=:2m]=> W2
}
)";
    auto parsed = d::parse(source);
    REQUIRE(parsed.ok());
    auto reparsed = d::parse(d::serialize(*parsed.document));
    REQUIRE(reparsed.ok());
    CHECK(*reparsed.document == *parsed.document);
    const d::RoutewayDecl* r1 = parsed.document->find_routeway("r'");
    REQUIRE(r1);
    CHECK(r1->units[0].two_way);
    CHECK_FALSE(r1->units[0].trail.has_value());
    const d::RoutewayDecl* r2 = parsed.document->find_routeway("r2");
    REQUIRE(r2);
    REQUIRE(r2->units[0].substitution);
    CHECK(r2->units[0].substitution->bindings.at("alpha") == "n + 1");
    CHECK(r2->units[0].substitution->bindings.at("beta") == "2m");
  }
  SUBCASE("generated documents round-trip") {
    testsupport::Rng rng(7201);
    for (int i = 0; i < 60; ++i) {
      d::Document doc = testsupport::random_document(rng);
      auto reparsed = d::parse(d::serialize(doc));
      REQUIRE(reparsed.ok());
      CHECK(*reparsed.document == doc);
    }
  }
}

TEST_CASE("annotations collect compass notes") {
  d::Document doc = parse_ok(fixture("school.rwy"));
  auto notes = doc.annotations();
  REQUIRE(notes.count("known_way"));
  CHECK(notes.at("known_way") == "Route through anchors the child already trusts");
  REQUIRE(notes.count("known_way#0"));
}

TEST_CASE("document builders hand out validated core objects") {
  d::Document doc = parse_ok(fixture("school.rwy"));
  Routeway known = doc.build_routeway("known_way");
  CHECK(known.length() == 3);
  Roadmap map = doc.build_roadmap("to_school");
  CHECK(map.routeways.size() == 2);
  Atlas atlas = doc.build_atlas("term1");
  CHECK(atlas.targets.size() == 2);
  CHECK(atlas_coverage(atlas).covering);
  CHECK_THROWS_AS(doc.build_routeway("nope"), Error);

  d::Document group = parse_ok(fixture("group.rwy"));
  CHECK(group.first_basefield().id == "B1");
  CHECK(group.all_units().size() == 3);

  SUBCASE("building a broken routeway fails loudly") {
    std::string source = R"(basefield B { trail P: "p" }
waypoint A: "a"
waypoint B2: "b"
waypoint C: "c"
routeway broken in B from A to C {
  A =[P]=> B2
}
)";
    auto result = d::parse(source);
    REQUIRE(result.ok());  // chain problems are lint errors, not parse errors
    try {
      result.document->build_routeway("broken");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "broken-chain");
    }
  }
}

TEST_CASE("parse failures are reported, never thrown") {
  for (const char* bad : {
           "basefield {",
           "waypoint A:",
           "routeway r in B from A to",
           "waypoint A: \"unterminated",
           "trail T: \"bad escape \\q\"",
           "waypoint A: \"a\" waypoint A2: \"b\"\nroutes nonsense ] => },,,",
           "filtration f { }",
           "@@@@",
           "waypoint \xff\xfe: \"a\"",
       }) {
    CAPTURE(bad);
    auto result = d::parse(bad);
    CHECK_FALSE(result.ok());
    CHECK(count_errors(result.diagnostics) >= 1);
  }
}

TEST_CASE("fuzzed inputs never crash the parser") {
  testsupport::Rng rng(7202);
  std::vector<std::string> seeds = {fixture("group.rwy"), fixture("inequality.rwy"),
                                    fixture("finite_field.rwy")};
  for (int i = 0; i < 2000; ++i) {
    std::string text = seeds[rng.below(seeds.size())];
    std::size_t edits = 1 + rng.below(8);
    for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
      std::size_t at = rng.below(text.size());
      switch (rng.below(3)) {
        case 0: text[at] = static_cast<char>(rng.below(256)); break;
        case 1: text.erase(at, rng.below(4) + 1); break;
        default: text.insert(at, 1, static_cast<char>(rng.below(256))); break;
      }
    }
    auto result = d::parse(text);  // must not throw
    CHECK((result.ok() || !result.diagnostics.empty()));
  }
}
