#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gifkit/consistency.hpp"
#include "gifkit/errors.hpp"
#include "gifkit/gdf.hpp"
#include "golden_gdf.hpp"
#include "oracles.hpp"
#include "random_protocol.hpp"

using namespace gifkit;
using namespace gifkit::literals;
using testing::protocol_from;

namespace {

Gif railway_gif() {
  auto doc = testing::railway();
  return derive_decisions(doc.protocol, doc.labels);
}

std::size_t at(const Gif& g, const char* text) {
  return g.product().index_of(parse_configuration(g.protocol(), text));
}

std::set<std::string> names(const Gif& g, const std::set<std::size_t>& members) {
  std::set<std::string> out;
  for (auto m : members) out.insert(g.product().name(m));
  return out;
}

// A child that starts playing after either hearing or seeing a violin.
Gif violin() {
  auto doc = parse_protocol(R"(protocol violin { role Child {
    states { idle, heard, saw, play } init idle / eps accept final { idle, heard, saw, play }
    idle -- eps / eps --> heard @decision Hear
    idle -- eps / eps --> saw @decision See
    heard -- eps / eps --> play @decision PlayAfterHearing
    saw -- eps / eps --> play @decision PlayAfterSeeing
    play -- eps / eps --> idle @decision Stop } })");
  return derive_decisions(doc.protocol, doc.labels);
}

// A sends x or y; B reaches the same state on both.
Gif either() {
  auto doc = parse_protocol(R"(protocol either {
    role A { outputs { x, y } states { a0, a1 } init a0 / eps accept final { a1 }
             a0 -- eps / x --> a1 @decision SendX
             a0 -- eps / y --> a1 @decision SendY }
    role B { inputs { x, y } states { b0, b1 } init b0 / eps accept final { b1 }
             b0 -- x / eps --> b1   b0 -- y / eps --> b1 }
    channel A -> B })");
  return derive_decisions(doc.protocol, doc.labels);
}

const char* kSelect = R"(protocol select {
  role A { outputs { x, y } states { a0, a1 } init a0 / eps accept final { a1 }
           a0 -- eps / x --> a1 @decision SendX
           a0 -- eps / y --> a1 @decision SendY }
  role B { inputs { x, y } states { b0, l, r } init b0 / eps accept final { l, r }
           b0 -- x / eps --> l @decision XLeft   b0 -- x / eps --> r @decision XRight
           b0 -- y / eps --> r @decision YRight  b0 -- y / eps --> l @decision YLeft }
  channel A -> B })";

}  // namespace

TEST_CASE("epsilon decision closures") {
  auto g = railway_gif();
  CHECK(names(g, epsilon_closure(g, at(g, "C.bridge,Z.away|Z.left")).members) ==
        std::set<std::string>{"C.bridge,Z.away|Z.left", "C.away,Z.away"});
  CHECK(epsilon_closure(g, 0).members == std::set<std::size_t>{0});
  auto c1 = epsilon_closure(g, parse_configuration(g.protocol(), "C.away,Z.wait|Z.arrived"));
  CHECK(names(g, c1.members) ==
        std::set<std::string>{"C.away,Z.wait|Z.arrived", "C.wait,Z.wait"});
  CHECK_THROWS_AS(epsilon_closure(g, 42), PreconditionError);
  CHECK_THROWS_AS(epsilon_closure(g, parse_configuration(g.protocol(), "C.wait,Z.away")),
                  PreconditionError);

  // Closing twice changes nothing.
  for (std::size_t c = 0; c < g.product().size(); ++c) {
    auto once = epsilon_closure(g, c).members;
    std::set<std::size_t> twice;
    for (auto m : once) {
      auto more = epsilon_closure(g, m).members;
      twice.insert(more.begin(), more.end());
    }
    CHECK(once == twice);
  }
}

TEST_CASE("railway GDF matches the hand enumeration") {
  auto g = railway_gif();
  auto gdf = build_gdf(g);
  CHECK(testing::compare_with_golden(g, gdf, testing::read_file(testing::golden_path(
                                                 "railway_gdf.txt"))) == "");
  CHECK(gdf.states.size() == 3);
  CHECK(gdf.edge_count() == 3);
  CHECK(gdf.partition_violations.empty());
  CHECK(gdf.inputs == std::set<Symbol>{"IArrive"_s, "ILeave"_s, "ILetYouGo"_s});
  CHECK(gdf.delta.at({0, "IArrive"_s}) == 1);
  CHECK(gdf.delta.at({1, "ILetYouGo"_s}) == 2);
  CHECK(gdf.delta.at({2, "ILeave"_s}) == 0);
  for (const auto& s : gdf.states) CHECK(s.accepting);
  CHECK(gdf.state_of(at(g, "C.bridge,Z.away|Z.left")) == 0);
  CHECK_THROWS_AS(gdf.state_of(17), PreconditionError);
}

TEST_CASE("GDF without decisions") {
  auto g = derive_decisions(protocol_from(R"(protocol solo { role A { states { s }
      init s / eps accept final { s } } })"));
  auto gdf = build_gdf(g);
  CHECK(gdf.states.size() == 1);
  CHECK(gdf.edge_count() == 0);
  CHECK(gdf.states[0].accepting);
}

TEST_CASE("overlapping closures are merged and reported") {
  auto g = either();
  auto gdf = build_gdf(g);
  CHECK(gdf.partition_violations.size() == 1);
  CHECK(gdf.states.size() == 2);
  CHECK(gdf.delta.at({0, "SendX"_s}) == 1);
  CHECK(gdf.delta.at({0, "SendY"_s}) == 1);
  CHECK(testing::gdf_nondeterminism(g, gdf) == 0);
  CHECK_FALSE(gdf.states[0].accepting);
  CHECK(gdf.states[1].accepting);
}

TEST_CASE("GDF is deterministic on random protocols") {
  std::mt19937_64 rng(4711);
  int built = 0;
  for (int i = 0; i < 400; ++i) {
    auto p = testing::random_protocol(rng);
    if (!check_consistent(p).consistent) continue;
    auto g = derive_decisions(p);
    auto gdf = build_gdf(g);
    ++built;
    CHECK(testing::gdf_nondeterminism(g, gdf) == 0);
    std::size_t covered = 0;
    for (const auto& s : gdf.states) covered += s.members.size();
    CHECK(covered == g.product().size());
    CHECK(gdf.state_of(g.product().initial()) == gdf.initial);
  }
  CHECK(built > 50);
}

TEST_CASE("abstract meaning of decisions") {
  auto g = railway_gif();
  auto arrive = abstract_meaning_of_decision(g, "IArrive"_s);
  REQUIRE(arrive.unique());
  CHECK(names(g, arrive.unique()->members) ==
        std::set<std::string>{"C.away,Z.wait|Z.arrived", "C.wait,Z.wait"});
  auto leave = abstract_meaning_of_decision(g, "ILeave"_s);
  CHECK(names(g, leave.unique()->members) ==
        std::set<std::string>{"C.bridge,Z.away|Z.left", "C.away,Z.away"});
  CHECK_THROWS_AS(abstract_meaning_of_decision(g, "Dance"_s), PreconditionError);
}

TEST_CASE("decision equivalence") {
  auto g = railway_gif();
  CHECK(decisions_equivalent(g, "IArrive"_s, "IArrive"_s));
  CHECK_FALSE(decisions_equivalent(g, "IArrive"_s, "ILeave"_s));

  auto v = violin();
  CHECK(decisions_equivalent(v, "PlayAfterHearing"_s, "PlayAfterSeeing"_s));
  CHECK_FALSE(decisions_equivalent(v, "Hear"_s, "See"_s));
  CHECK(decisions_equivalent(v, "PlayAfterSeeing"_s, "PlayAfterHearing"_s));
}

TEST_CASE("decision equivalence is an equivalence relation") {
  std::vector<Gif> gifs;
  gifs.push_back(railway_gif());
  gifs.push_back(violin());
  gifs.push_back(either());
  for (const auto& g : gifs) {
    std::vector<Symbol> ds;
    for (const auto& [d, info] : g.decisions()) ds.push_back(d);
    for (const auto& a : ds) {
      CHECK(decisions_equivalent(g, a, a));
      for (const auto& b : ds) {
        CHECK(decisions_equivalent(g, a, b) == decisions_equivalent(g, b, a));
        for (const auto& c : ds) {
          if (decisions_equivalent(g, a, b) && decisions_equivalent(g, b, c)) {
            CHECK(decisions_equivalent(g, a, c));
          }
        }
      }
    }
  }
}

TEST_CASE("enforced selections") {
  auto g = railway_gif();
  CHECK(enforced_selections(g, {"C", "arrived"_s}, at(g, "C.away,Z.wait|Z.arrived")).empty());
  CHECK_THROWS_AS(enforced_selections(g, {"C", "left"_s}, at(g, "C.away,Z.wait|Z.arrived")),
                  PreconditionError);
  CHECK_THROWS_AS(enforced_selections(g, {"C", "arrived"_s}, 0), PreconditionError);

  auto doc = parse_protocol(kSelect);
  auto s = derive_decisions(doc.protocol, doc.labels);
  CHECK(enforced_selections(s, {"B", "x"_s}, at(s, "A.a1,B.b0|A.x")) ==
        std::set<Symbol>{"XLeft"_s, "XRight"_s});
  CHECK(enforced_selections(s, {"B", "y"_s}, at(s, "A.a1,B.b0|A.y")) ==
        std::set<Symbol>{"YLeft"_s, "YRight"_s});
}

TEST_CASE("character meaning") {
  auto doc = parse_protocol(kSelect);
  auto s = derive_decisions(doc.protocol, doc.labels);
  auto px = at(s, "A.a1,B.b0|A.x");
  auto py = at(s, "A.a1,B.b0|A.y");
  CHECK(characters_same_meaning(s, {"B", "x"_s}, px, {"B", "y"_s}, py));
  CHECK(characters_same_meaning_everywhere(s, {"B", "x"_s}, {"B", "y"_s}));

  auto g = railway_gif();
  auto c1 = at(g, "C.away,Z.wait|Z.arrived");
  auto c3 = at(g, "C.bridge,Z.wait|C.go");
  auto c5 = at(g, "C.bridge,Z.away|Z.left");
  // No enforced selections on either side: both meanings are empty.
  CHECK(characters_same_meaning(g, {"C", "arrived"_s}, c1, {"Z", "go"_s}, c3));
  CHECK(characters_same_meaning_everywhere(g, {"C", "arrived"_s}, {"C", "left"_s}));
  CHECK_THROWS_AS(characters_same_meaning(g, {"C", "arrived"_s}, c5, {"Z", "go"_s}, c3),
                  PreconditionError);
  CHECK_THROWS_AS(characters_same_meaning_everywhere(g, {"C", "nothing"_s}, {"C", "left"_s}),
                  PreconditionError);

  auto mixed = parse_protocol(R"(protocol mixed {
    role A { outputs { x, y } states { a0, a1 } init a0 / eps accept final { a1 }
             a0 -- eps / x --> a1 @decision SendX
             a0 -- eps / y --> a1 @decision SendY }
    role B { inputs { x, y } states { b0, l, r } init b0 / eps accept final { l, r }
             b0 -- x / eps --> l @decision XLeft   b0 -- x / eps --> r @decision XRight
             b0 -- y / eps --> r }
    channel A -> B })");
  auto m = derive_decisions(mixed.protocol, mixed.labels);
  CHECK_FALSE(characters_same_meaning_everywhere(m, {"B", "x"_s}, {"B", "y"_s}));
}

TEST_CASE("composing meanings") {
  auto g = railway_gif();
  auto m1 = interpret(g, 0, RoleChar::eps(), "IArrive"_s);
  auto m2 = interpret(g, m1.target, {"C", "arrived"_s}, {});
  auto composed = compose_meaning(g, m1, m2);
  REQUIRE(composed);
  CHECK(g.product().name(composed->config) == "C.wait,Z.wait");
  CHECK(composed->output.is_eps());
  CHECK_FALSE(compose_meaning(g, m2, m1));

  auto bogus = m1;
  bogus.target = 3;
  CHECK_THROWS_AS(compose_meaning(g, bogus, m2), PreconditionError);

  // Exhaustively: consecutive pairs compose to the second result.
  auto all = all_interpretations(g);
  for (const auto& a : all) {
    for (const auto& b : all) {
      auto c = compose_meaning(g, a, b);
      CHECK(c.has_value() == (b.source == a.target));
      if (c) {
        CHECK(c->config == b.target);
        CHECK(c->output == b.output);
      }
    }
  }
}
