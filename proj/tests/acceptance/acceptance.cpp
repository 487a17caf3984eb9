// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "gifkit/consistency.hpp"
#include "gifkit/errors.hpp"
#include "gifkit/gdf.hpp"
#include "golden_gdf.hpp"
#include "oracles.hpp"
#include "random_protocol.hpp"

using namespace gifkit;
using namespace gifkit::literals;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

// The shared random corpus: 500 consistent protocols plus every rejected
// candidate met on the way.
struct Corpus {
  std::vector<Protocol> consistent;
  std::vector<Protocol> rejected;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    std::mt19937_64 rng(kSeed);
    while (out.consistent.size() < 500) {
      auto p = testing::random_protocol(rng);
      (check_consistent(p).consistent ? out.consistent : out.rejected).push_back(std::move(p));
    }
    return out;
  }();
  return c;
}

const std::vector<Gif>& corpus_gifs() {
  static const std::vector<Gif> gifs = [] {
    std::vector<Gif> out;
    for (const auto& p : corpus().consistent) out.push_back(derive_decisions(p));
    return out;
  }();
  return gifs;
}

Protocol with_role(const Protocol& p, const RoleId& id, const IOAutomaton& a) {
  std::map<RoleId, IOAutomaton> roles;
  for (const auto& [rid, role] : p.roles()) roles.emplace(rid, rid == id ? a : role);
  return Protocol(p.name(), std::move(roles), p.channels());
}

Outcome railway_verdict() {
  auto start = Clock::now();
  auto report = check_consistent(testing::railway().protocol);
  auto t = seconds_since(start);
  bool ok = report.well_formed.holds && report.interruptible.holds && report.accepting.holds &&
            report.consistent;
  return {ok && t < 1.0, (ok ? "consistent" : "not consistent") + std::string(", ") + fmt_seconds(t)};
}

Outcome railway_decisions() {
  auto start = Clock::now();
  auto doc = testing::railway();
  auto g = derive_decisions(doc.protocol, doc.labels);
  auto t = seconds_since(start);
  std::set<Symbol> names;
  bool spontaneous = true;
  for (const auto& [name, d] : g.decisions()) {
    names.insert(name);
    spontaneous = spontaneous && d.kind == DecisionKind::Spontaneous;
  }
  bool ok = names == std::set<Symbol>{"IArrive"_s, "ILeave"_s, "ILetYouGo"_s} && spontaneous;
  return {ok && t < 1.0, std::to_string(names.size()) + " decisions, " + fmt_seconds(t)};
}

Outcome railway_gdf() {
  auto doc = testing::railway();
  auto g = derive_decisions(doc.protocol, doc.labels);
  auto gdf = build_gdf(g);
  auto diff = testing::compare_with_golden(
      g, gdf, testing::read_file(testing::golden_path("railway_gdf.txt")));

  // Walk the cycle from the initial state.
  std::vector<std::string> labels;
  auto cur = gdf.initial;
  for (int k = 0; k < 3; ++k) {
    std::vector<std::pair<Symbol, std::size_t>> out;
    for (const auto& [key, to] : gdf.delta) {
      if (key.first == cur) out.emplace_back(key.second, to);
    }
    if (out.size() != 1) return {false, "state without a unique outgoing edge"};
    labels.push_back(out[0].first.name());
    cur = out[0].second;
  }
  bool cycle = cur == gdf.initial &&
               labels == std::vector<std::string>{"IArrive", "ILetYouGo", "ILeave"};
  bool ok = diff.empty() && gdf.states.size() == 3 && gdf.edge_count() == 3 && cycle;
  return {ok, diff.empty() ? "matches golden file" : diff};
}

Outcome determinism() {
  std::size_t violations = 0;
  for (const auto& g : corpus_gifs()) {
    std::map<GifKey, std::set<std::pair<RoleChar, std::size_t>>> images;
    const auto& ts = g.product().transitions();
    for (std::size_t t = 0; t < ts.size(); ++t) {
      images[{ts[t].input, g.decision_of(t), ts[t].from}].emplace(ts[t].output, ts[t].to);
    }
    for (const auto& [key, set] : images) violations += set.size() > 1 ? 1 : 0;
    try {
      violations += testing::gdf_nondeterminism(g, build_gdf(g));
    } catch (const std::logic_error&) {
      ++violations;
    }
  }
  return {violations == 0, std::to_string(corpus_gifs().size()) + " GIFs, " +
                               std::to_string(violations) + " violations"};
}

Outcome projection() {
  std::size_t violations = 0;
  for (const auto& g : corpus_gifs()) {
    using Edge = std::tuple<std::size_t, RoleChar, RoleChar, std::size_t>;
    std::multiset<Edge> erased, product;
    for (const auto& [key, image] : g.delta_prime()) {
      erased.emplace(key.config, key.input, image.output, image.config);
    }
    for (const auto& t : g.product().transitions()) product.emplace(t.from, t.input, t.output, t.to);
    std::set<Edge> a(erased.begin(), erased.end()), b(product.begin(), product.end());
    violations += a == b ? 0 : 1;
  }
  return {violations == 0, std::to_string(violations) + " violations"};
}

Outcome oracle_equivalence() {
  auto start = Clock::now();
  std::size_t checked = 0, disagreements = 0, ill_formed = 0, endless = 0;
  auto run = [&](const Protocol& p) {
    auto product = build_product(p);
    if (product.size() > 50) return;
    ++checked;
    auto observed = testing::observe_runs(p, product.size() + 1);
    ill_formed += observed.well_formed ? 0 : 1;
    endless += observed.interruptible ? 0 : 1;
    disagreements += check_well_formed(product).holds != observed.well_formed;
    disagreements += check_interruptible(product).holds != observed.interruptible;
  };
  for (const auto& p : corpus().consistent) run(p);
  for (const auto& p : corpus().rejected) run(p);
  auto t = seconds_since(start);
  return {disagreements == 0 && t < 60.0,
          std::to_string(checked) + " protocols (" + std::to_string(ill_formed) +
              " not well-formed, " + std::to_string(endless) + " not interruptible), " +
              std::to_string(disagreements) + " disagreements, " + fmt_seconds(t)};
}

Outcome mutations() {
  auto railway = testing::railway().protocol;
  const auto& c = railway.role("C");
  std::vector<Transition> delta;
  for (const auto& t : c.delta()) {
    if (t.input != "arrived"_s) delta.push_back(t);
  }
  auto deaf = with_role(railway, "C",
                        IOAutomaton(c.inputs(), c.outputs(), c.states(), c.initial(), delta,
                                    c.acceptance()));
  std::map<RoleId, IOAutomaton> narrowed;
  for (const auto& [id, a] : railway.roles()) {
    narrowed.emplace(id, IOAutomaton(a.inputs(), a.outputs(), a.states(), a.initial(), a.delta(),
                                     Muller{{{"away"_s, "wait"_s}}}));
  }
  Protocol narrow(railway.name(), narrowed, railway.channels());
  auto echo = testing::echo().protocol;

  std::string detail;
  bool ok = true;
  auto expect = [&](const char* name, const Protocol& p, const Verdict& v) {
    bool flipped = !v.holds && v.witness && replay_witness(p, *v.witness);
    ok = ok && flipped;
    detail += std::string(detail.empty() ? "" : ", ") + name + (flipped ? " detected" : " missed");
  };
  expect("deaf controller", deaf, check_well_formed(deaf));
  expect("echo", echo, check_interruptible(echo));
  expect("narrow Muller", narrow, check_accepting(narrow));
  return {ok, detail};
}

Outcome renaming() {
  auto doc = testing::railway();
  auto base = check_consistent(doc.protocol);
  auto g = derive_decisions(doc.protocol, doc.labels);
  auto gdf = build_gdf(g);
  std::mt19937_64 rng(kSeed);
  std::size_t differences = 0;
  for (int i = 0; i < 100; ++i) {
    auto r = testing::random_renaming(rng, doc.protocol);
    auto p = rename_protocol(doc.protocol, r);
    auto report = check_consistent(p);
    auto rg = derive_decisions(p, rename_labels(doc.labels, r));
    auto rgdf = build_gdf(rg);
    bool same = report.consistent == base.consistent &&
                report.well_formed.holds == base.well_formed.holds &&
                report.interruptible.holds == base.interruptible.holds &&
                report.accepting.holds == base.accepting.holds &&
                rg.decisions().size() == g.decisions().size() &&
                rgdf.states.size() == gdf.states.size() &&
                rgdf.edge_count() == gdf.edge_count() &&
                testing::gdf_nondeterminism(rg, rgdf) == 0;
    differences += same ? 0 : 1;
  }
  return {differences == 0, "100 renamings, " + std::to_string(differences) + " differences"};
}

Outcome fulfilment() {
  auto doc = testing::railway();
  auto g = derive_decisions(doc.protocol, doc.labels);
  std::vector<Symbol> all{"IArrive"_s, "ILetYouGo"_s, "ILeave"_s};
  bool ok = fulfills(g, 0, {{}, all});
  std::size_t omissions = 0;
  for (std::size_t skip = 0; skip < all.size(); ++skip) {
    std::vector<Symbol> cycle;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (k != skip) cycle.push_back(all[k]);
    }
    bool accepted = true;
    try {
      accepted = fulfills(g, 0, {{}, cycle});
    } catch (const NotEnabledError&) {
      accepted = false;
    }
    omissions += accepted ? 0 : 1;
  }
  ok = ok && omissions == 3;
  return {ok, std::string("full cycle ") + (ok ? "accepted" : "rejected") + ", " +
                  std::to_string(omissions) + "/3 omissions rejected"};
}

Outcome equivalence_relation() {
  std::size_t violations = 0;
  for (const auto& g : corpus_gifs()) {
    std::vector<Symbol> ds;
    for (const auto& [d, info] : g.decisions()) {
      if (!g.uses(d).empty()) ds.push_back(d);
    }
    const auto n = ds.size();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) eq[a][b] = decisions_equivalent(g, ds[a], ds[b]);
    }
    for (std::size_t a = 0; a < n; ++a) {
      violations += eq[a][a] ? 0 : 1;
      for (std::size_t b = 0; b < n; ++b) {
        violations += eq[a][b] == eq[b][a] ? 0 : 1;
        for (std::size_t c = 0; c < n; ++c) {
          violations += eq[a][b] && eq[b][c] && !eq[a][c] ? 1 : 0;
        }
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations"};
}

Outcome compositionality() {
  auto doc = testing::railway();
  auto g = derive_decisions(doc.protocol, doc.labels);
  auto all = all_interpretations(g);
  std::size_t pairs = 0, wrong = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      ++pairs;
      auto c = compose_meaning(g, a, b);
      bool consecutive = b.source == a.target;
      if (c.has_value() != consecutive) ++wrong;
      if (c && (c->config != b.target || c->output != b.output)) ++wrong;
    }
  }
  return {wrong == 0, std::to_string(pairs) + " pairs, " + std::to_string(wrong) + " wrong"};
}

Outcome robustness() {
  std::mt19937_64 rng(kSeed);
  std::vector<std::string> seeds{serialize(testing::railway().protocol, testing::railway().labels),
                                 serialize(testing::echo().protocol)};
  for (int i = 0; i < 8; ++i) seeds.push_back(serialize(testing::random_protocol(rng)));
  const std::string tokens = "{}-/>@,.#\n\t abcsXYZ_0123eps";
  const std::vector<std::string> words{"protocol", "role", "channel", "inputs", "outputs",
                                       "states",   "init", "accept",  "final",  "muller",
                                       "eps",      "-->",  "--",      "->",     "@decision"};
  std::size_t rejected = 0, unlocated = 0, crashed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    if (i % 10 == 0) {
      auto n = rng() % 200;
      for (std::size_t k = 0; k < n; ++k) text += static_cast<char>(rng() % 256);
    } else {
      text = seeds[rng() % seeds.size()];
      auto edits = 1 + rng() % 6;
      for (std::size_t e = 0; e < edits; ++e) {
        auto pos = text.empty() ? 0 : rng() % text.size();
        switch (rng() % 5) {
          case 0: text.erase(pos, 1 + rng() % 8); break;
          case 1: text.insert(pos, 1, tokens[rng() % tokens.size()]); break;
          case 2: text.insert(pos, " " + words[rng() % words.size()] + " "); break;
          case 3:
            if (!text.empty()) text[pos] = tokens[rng() % tokens.size()];
            break;
          default: text = text.substr(0, pos); break;
        }
      }
    }
    try {
      parse_protocol(text);
    } catch (const ParseError& e) {
      ++rejected;
      std::size_t lines = 1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
      if (e.location().line < 1 || e.location().column < 1 || e.location().line > lines) {
        ++unlocated;
      }
    } catch (...) {
      ++crashed;
    }
  }
  return {unlocated == 0 && crashed == 0,
          "10000 inputs, " + std::to_string(rejected) + " rejected, " +
              std::to_string(unlocated) + " unlocated, " + std::to_string(crashed) +
              " unexpected exceptions"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"railway verdict", railway_verdict},
      {"railway decision set", railway_decisions},
      {"railway GDF cycle", railway_gdf},
      {"determinism on random protocols", determinism},
      {"projection soundness", projection},
      {"oracle equivalence", oracle_equivalence},
      {"mutation sensitivity", mutations},
      {"renaming invariance", renaming},
      {"fulfilment", fulfilment},
      {"decision equivalence is an equivalence", equivalence_relation},
      {"compositionality", compositionality},
      {"parser robustness", robustness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
