#include "gifkit/gdf.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "gifkit/errors.hpp"

namespace gifkit {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

bool includes(const std::set<std::size_t>& outer, const std::set<std::size_t>& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::size_t delivered_at(const Gif& g, const RoleChar& input, std::size_t cfg) {
  if (cfg >= g.product().size()) throw PreconditionError("configuration is not reachable");
  const auto& c = g.product().configuration(cfg);
  auto delivered = c.pending.is_eps() ? std::nullopt : g.protocol().route(c.pending);
  if (!delivered || *delivered != input) {
    throw PreconditionError("character " + input.str() + " is not delivered at " +
                            g.product().name(cfg));
  }
  return cfg;
}

std::multiset<std::set<std::size_t>> selection_targets(const Gif& g, const RoleChar& input,
                                                       std::size_t cfg) {
  std::multiset<std::set<std::size_t>> targets;
  for (const auto& d : enforced_selections(g, input, cfg)) {
    for (auto t : g.product().outgoing(cfg)) {
      if (g.decision_of(t) == d) {
        targets.insert(epsilon_closure(g, g.product().transitions()[t].to).members);
      }
    }
  }
  return targets;
}

}  // namespace

EpsilonDecisionClosure epsilon_closure(const Gif& g, std::size_t cfg) {
  if (cfg >= g.product().size()) throw PreconditionError("configuration is not reachable");
  EpsilonDecisionClosure closure{cfg, {cfg}};
  std::vector<std::size_t> todo{cfg};
  while (!todo.empty()) {
    auto cur = todo.back();
    todo.pop_back();
    for (auto t : g.product().outgoing(cur)) {
      if (!g.decision_of(t).is_eps()) continue;
      auto next = g.product().transitions()[t].to;
      if (closure.members.insert(next).second) todo.push_back(next);
    }
  }
  return closure;
}

EpsilonDecisionClosure epsilon_closure(const Gif& g, const Configuration& cfg) {
  return epsilon_closure(g, g.product().index_of(cfg));
}

std::size_t Gdf::state_of(std::size_t cfg) const {
  if (cfg >= state_of_config.size() || state_of_config[cfg] == static_cast<std::size_t>(-1)) {
    throw PreconditionError("configuration #" + std::to_string(cfg) + " belongs to no GDF state");
  }
  return state_of_config[cfg];
}

Gdf build_gdf(const Gif& g) {
  const auto& product = g.product();
  const auto none = static_cast<std::size_t>(-1);

  std::vector<std::size_t> seeds{product.initial()};
  for (std::size_t t = 0; t < product.transitions().size(); ++t) {
    if (!g.decision_of(t).is_eps()) seeds.push_back(product.transitions()[t].to);
  }
  std::sort(seeds.begin() + 1, seeds.end());
  seeds.erase(std::unique(seeds.begin() + 1, seeds.end()), seeds.end());
  if (auto dup = std::find(seeds.begin() + 1, seeds.end(), seeds.front()); dup != seeds.end()) {
    seeds.erase(dup);
  }

  std::vector<EpsilonDecisionClosure> closures;
  for (auto s : seeds) closures.push_back(epsilon_closure(g, s));

  // Merge closures that share a configuration.
  std::vector<std::size_t> parent(closures.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<std::size_t>> containing(product.size());
  for (std::size_t c = 0; c < closures.size(); ++c) {
    for (auto m : closures[c].members) containing[m].push_back(c);
  }
  Gdf gdf;
  std::set<std::pair<std::size_t, std::size_t>> compared;
  for (const auto& list : containing) {
    for (std::size_t k = 1; k < list.size(); ++k) {
      parent[find_root(parent, list[k])] = find_root(parent, list[0]);
      for (std::size_t j = 0; j < k; ++j) {
        auto a = list[j], b = list[k];
        if (!compared.emplace(a, b).second) continue;
        if (!includes(closures[a].members, closures[b].members) &&
            !includes(closures[b].members, closures[a].members)) {
          gdf.partition_violations.push_back({closures[a].seed, closures[b].seed});
        }
      }
    }
  }

  std::map<std::size_t, std::size_t> group_state;  // root closure -> provisional state
  std::vector<GdfState> provisional;
  std::vector<std::size_t> provisional_of(product.size(), none);
  for (std::size_t c = 0; c < closures.size(); ++c) {
    auto root = find_root(parent, c);
    auto [it, inserted] = group_state.emplace(root, provisional.size());
    if (inserted) provisional.emplace_back();
    auto& state = provisional[it->second];
    state.seeds.push_back(closures[c].seed);
    state.members.insert(closures[c].members.begin(), closures[c].members.end());
    for (auto m : closures[c].members) provisional_of[m] = it->second;
  }

  std::map<std::pair<std::size_t, Symbol>, std::size_t> provisional_delta;
  for (std::size_t t = 0; t < product.transitions().size(); ++t) {
    const auto& d = g.decision_of(t);
    if (d.is_eps()) continue;
    const auto& tr = product.transitions()[t];
    auto from = provisional_of[tr.from];
    auto to = provisional_of[tr.to];
    auto [it, inserted] = provisional_delta.emplace(std::make_pair(from, d), to);
    if (!inserted && it->second != to) {
      throw std::logic_error("GDF is not deterministic for decision " + d.str());
    }
    gdf.inputs.insert(d);
  }

  // Renumber breadth-first from the initial state, decisions in name order.
  std::vector<std::size_t> renumber(provisional.size(), none);
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue{provisional_of[product.initial()]};
  renumber[queue.front()] = 0;
  order.push_back(queue.front());
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (const auto& [key, to] : provisional_delta) {
      if (key.first != cur || renumber[to] != none) continue;
      renumber[to] = order.size();
      order.push_back(to);
      queue.push_back(to);
    }
  }
  for (std::size_t s = 0; s < provisional.size(); ++s) {
    if (renumber[s] == none) {
      renumber[s] = order.size();
      order.push_back(s);
    }
  }

  for (auto s : order) {
    auto state = std::move(provisional[s]);
    state.accepting = std::any_of(state.members.begin(), state.members.end(),
                                  [&](std::size_t m) { return product.in_acceptance_component(m); });
    gdf.states.push_back(std::move(state));
  }
  for (const auto& [key, to] : provisional_delta) {
    gdf.delta.emplace(std::make_pair(renumber[key.first], key.second), renumber[to]);
  }
  gdf.state_of_config.assign(product.size(), none);
  for (std::size_t m = 0; m < product.size(); ++m) {
    if (provisional_of[m] != none) gdf.state_of_config[m] = renumber[provisional_of[m]];
  }
  gdf.initial = 0;
  return gdf;
}

std::set<std::set<std::size_t>> DecisionMeaning::targets() const {
  std::set<std::set<std::size_t>> out;
  for (const auto& [source, closure] : by_source) out.insert(closure.members);
  return out;
}

std::optional<EpsilonDecisionClosure> DecisionMeaning::unique() const {
  if (by_source.empty() || targets().size() != 1) return std::nullopt;
  return by_source.begin()->second;
}

DecisionMeaning abstract_meaning_of_decision(const Gif& g, const Symbol& d) {
  if (!g.has_decision(d)) {
    throw PreconditionError("'" + d.str() + "' is not a decision used in this GIF");
  }
  DecisionMeaning meaning{d, {}};
  for (auto t : g.uses(d)) {
    const auto& tr = g.product().transitions()[t];
    meaning.by_source.emplace(tr.from, epsilon_closure(g, tr.to));
  }
  return meaning;
}

bool decisions_equivalent(const Gif& g, const Symbol& d1, const Symbol& d2) {
  return abstract_meaning_of_decision(g, d1).targets() ==
         abstract_meaning_of_decision(g, d2).targets();
}

std::set<Symbol> enforced_selections(const Gif& g, const RoleChar& input, std::size_t cfg) {
  delivered_at(g, input, cfg);
  std::set<Symbol> result;
  for (auto t : g.product().outgoing(cfg)) {
    if (!g.decision_of(t).is_eps()) result.insert(g.decision_of(t));
  }
  return result;
}

bool characters_same_meaning(const Gif& g, const RoleChar& i1, std::size_t p1,
                             const RoleChar& i2, std::size_t p2) {
  return selection_targets(g, i1, p1) == selection_targets(g, i2, p2);
}

bool characters_same_meaning_everywhere(const Gif& g, const RoleChar& i1, const RoleChar& i2) {
  auto where = [&](const RoleChar& input) {
    std::vector<std::size_t> cfgs;
    for (std::size_t c = 0; c < g.product().size(); ++c) {
      const auto& pending = g.product().configuration(c).pending;
      if (pending.is_eps()) continue;
      if (auto delivered = g.protocol().route(pending); delivered && *delivered == input) {
        cfgs.push_back(c);
      }
    }
    if (cfgs.empty()) {
      throw PreconditionError("character " + input.str() + " is never delivered");
    }
    return cfgs;
  };
  auto at1 = where(i1);
  auto at2 = where(i2);
  for (auto p1 : at1) {
    for (auto p2 : at2) {
      if (!characters_same_meaning(g, i1, p1, i2, p2)) return false;
    }
  }
  return true;
}

std::optional<Meaning> compose_meaning(const Gif& g, const Interpretation& m1,
                                       const Interpretation& m2) {
  for (const auto* m : {&m1, &m2}) {
    if (interpret(g, m->source, m->input, m->decision) != *m) {
      throw PreconditionError("argument is not an interpretation of this GIF");
    }
  }
  if (m2.source != m1.target) return std::nullopt;
  return Meaning{m2.output, m2.target};
}

}  // namespace gifkit
