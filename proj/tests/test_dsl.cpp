#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gifkit/dsl.hpp"
#include "random_protocol.hpp"

using namespace gifkit;
using namespace gifkit::literals;

namespace {

SourceLocation error_at(std::string_view text) {
  try {
    parse_protocol(text);
  } catch (const ParseError& e) {
    return e.location();
  }
  FAIL("document was accepted");
  return {};
}

std::string message_of(std::string_view text) {
  try {
    parse_protocol(text);
  } catch (const ParseError& e) {
    return e.message();
  }
  return "";
}

const char* kRole = "  role A { states { s } init s / eps accept final { s } }\n";

}  // namespace

TEST_CASE("railway document") {
  auto doc = testing::railway();
  const auto& p = doc.protocol;
  CHECK(p.name() == "railway");
  CHECK(p.role_count() == 2);
  CHECK(p.role_id(0) == "C");
  CHECK(p.channels().size() == 2);
  CHECK(p.role("C").inputs() == Alphabet{"arrived"_s, "left"_s});
  CHECK(p.role("Z").delta().size() == 3);
  CHECK(std::get<Muller>(p.role("Z").acceptance()).sets.size() == 1);
  CHECK(doc.labels.size() == 3);
  CHECK(doc.labels.at({"C", {{}, "go"_s, "wait"_s, "bridge"_s}}) == "ILetYouGo"_s);
}

TEST_CASE("syntax variations") {
  auto doc = parse_protocol(R"(# leading comment
protocol p{role A{inputs{}outputs{x y}states{s,t,}init s/x accept final{}
s--eps/x-->t}role B{inputs{x,y}states{u}init u/eps accept final{u}u--x/eps-->u u--y/eps-->u}
channel A->B})");
  CHECK(doc.protocol.role("A").outputs().size() == 2);
  CHECK(doc.protocol.role("A").initial().output == "x"_s);
  CHECK(std::get<FiniteFinal>(doc.protocol.role("A").acceptance()).states.empty());
}

TEST_CASE("errors carry locations") {
  CHECK(message_of("") == "no protocol declared");
  CHECK(error_at("").line == 1);

  auto loc = error_at("protocol p {\n  role A { states { s } init s / eps accept final { s }\n"
                      "  s -- eps / eps --> nowhere }\n}");
  CHECK(loc.line == 3);
  CHECK(loc.column == 22);

  CHECK(error_at("protocol p {\n  role A {\n    colour blue\n  }\n}").line == 3);
  CHECK(error_at("protocol p {\n  role A $ }").column == 10);
  CHECK(error_at(std::string("protocol p {\n") + kRole + "  channel A -> Q\n}").line == 3);
  CHECK(error_at(std::string("protocol p {\n") + kRole + "}\ntrailing").line == 4);
  CHECK(error_at("protocol p {\n  role A { inputs { a } outputs { a } states { s } init s / eps"
                 " accept final { s } }\n}")
            .line == 2);
  CHECK(error_at("protocol p {\n  role A { states { s } init s / eps accept final { s }\n"
                 "    s -- eps / eps --> s @decision X\n"
                 "    s -- eps / eps --> s }\n}")
            .line == 4);
}

TEST_CASE("semantic errors") {
  const std::string head = "protocol p {\n";
  CHECK(message_of(head + "}").find("declares no role") != std::string::npos);
  CHECK(message_of(head + kRole + kRole + "}").find("declared twice") != std::string::npos);
  CHECK(message_of(head + "role A { init s / eps accept final { s } }}").find("no states") !=
        std::string::npos);
  CHECK(message_of(head + "role A { states { s } accept final { s } }}").find("no 'init'") !=
        std::string::npos);
  CHECK(message_of(head + "role A { states { s, s } init s / eps accept final { s } }}")
            .find("listed twice") != std::string::npos);
  CHECK(message_of(head + "role A { states { s, t } init s / eps accept final { s }\n"
                          "s -- eps / eps --> t @decision Go\n"
                          "t -- eps / eps --> s @decision Go }}")
            .find("used twice") != std::string::npos);
  CHECK(message_of(head + "role A { states { s, t } init s / eps accept final { s }\n"
                          "s -- eps / eps --> t @decision t }}")
            .find("decision name") != std::string::npos);
  CHECK(message_of(head + "role A { outputs { x } states { s } init s / eps accept final { s } }\n"
                          "role B { outputs { y } states { s } init s / eps accept final { s } }\n"
                          "channel A -> B }")
            .find("carries no character") != std::string::npos);
  CHECK(message_of(head + kRole + "role B { states { s } init s / eps accept muller { { s } } }}")
            .find("mix") != std::string::npos);
}

TEST_CASE("canonical text") {
  auto doc = testing::railway();
  auto text = serialize(doc.protocol, doc.labels);
  CHECK(text == testing::read_file(testing::golden_path("railway_canonical.gif")));
  auto again = parse_protocol(text);
  CHECK(again.protocol == doc.protocol);
  CHECK(again.labels == doc.labels);
  CHECK(serialize(again.protocol, again.labels) == text);
}

TEST_CASE("serialization round trip on random protocols") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    auto p = testing::random_protocol(rng);
    auto text = serialize(p);
    auto back = parse_protocol(text);
    CHECK(back.protocol == p);
    CHECK(back.labels.empty());
    CHECK(serialize(back.protocol) == text);
  }
}

TEST_CASE("mutated documents fail cleanly") {
  std::mt19937_64 rng(12);
  const auto base = serialize(testing::railway().protocol, testing::railway().labels);
  const std::string alphabet = "{}-/>@,.# \nabAZ_eps0";
  for (int i = 0; i < 500; ++i) {
    auto text = base;
    for (int k = 0; k < 3; ++k) {
      auto pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(pos, 1); break;
        case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[pos] = alphabet[rng() % alphabet.size()]; break;
      }
    }
    try {
      parse_protocol(text);
    } catch (const ParseError& e) {
      CHECK(e.location().line >= 1);
      CHECK(e.location().column >= 1);
    }
  }
}
