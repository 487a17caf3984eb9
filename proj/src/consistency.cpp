#include "gifkit/consistency.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>

#include "gifkit/errors.hpp"

namespace gifkit {

namespace {

// Choices along a shortest path from `from` to `to` that only visits
// configurations admitted by `allowed`. Empty optional if there is none.
template <typename Allowed>
std::optional<std::vector<std::size_t>> shortest_choices(const ProductAutomaton& product,
                                                         std::size_t from, std::size_t to,
                                                         Allowed allowed) {
  std::vector<std::optional<std::size_t>> via(product.size());
  std::vector<bool> seen(product.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    auto cur = queue.front();
    queue.pop_front();
    for (auto t : product.outgoing(cur)) {
      auto next = product.transitions()[t].to;
      if (seen[next] || !allowed(next)) continue;
      seen[next] = true;
      via[next] = t;
      queue.push_back(next);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> choices;
  for (auto cur = to; cur != from;) {
    const auto& t = product.transitions()[*via[cur]];
    choices.push_back(t.choice);
    cur = t.from;
  }
  std::reverse(choices.begin(), choices.end());
  return choices;
}

std::vector<std::size_t> prefix_to(const ProductAutomaton& product, std::size_t target) {
  return *shortest_choices(product, product.initial(), target, [](std::size_t) { return true; });
}

// Strongly connected components with at least one edge of the subgraph
// induced by `allowed` (Tarjan's algorithm, iterative). Members are sorted.
std::vector<std::vector<std::size_t>> cyclic_components(const ProductAutomaton& product,
                                                        const std::vector<bool>& allowed) {
  const std::size_t n = product.size();
  const std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> result;
  std::size_t next_index = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!allowed[root] || index[root] != unset) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      auto out = product.outgoing(f.node);
      if (f.edge < out.size()) {
        auto w = product.transitions()[out[f.edge++]].to;
        if (!allowed[w]) continue;
        if (index[w] == unset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      auto v = f.node;
      if (low[v] == index[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        bool cyclic = component.size() > 1;
        for (auto t : product.outgoing(v)) cyclic = cyclic || product.transitions()[t].to == v;
        if (cyclic) {
          std::sort(component.begin(), component.end());
          result.push_back(std::move(component));
        }
      }
      frames.pop_back();
      if (!frames.empty()) {
        auto parent = frames.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return result;
}

// A closed walk from members.front() through every member, staying inside
// the set.
std::vector<std::size_t> covering_cycle(const ProductAutomaton& product,
                                        const std::vector<std::size_t>& members,
                                        const std::vector<bool>& in_set) {
  auto inside = [&](std::size_t i) { return static_cast<bool>(in_set[i]); };
  std::vector<std::size_t> choices;
  auto cur = members.front();
  auto append = [&](std::size_t to) {
    if (cur == to) {
      // A closed walk of length >= 1 back to the same configuration.
      for (auto t : product.outgoing(cur)) {
        const auto& tr = product.transitions()[t];
        if (!in_set[tr.to]) continue;
        auto back = shortest_choices(product, tr.to, to, inside);
        if (!back) continue;
        choices.push_back(tr.choice);
        choices.insert(choices.end(), back->begin(), back->end());
        return;
      }
    }
    auto path = shortest_choices(product, cur, to, inside);
    choices.insert(choices.end(), path->begin(), path->end());
    cur = to;
  };
  for (std::size_t k = 1; k < members.size(); ++k) append(members[k]);
  append(members.front());
  return choices;
}

Witness unaccepted_termination(const ProductAutomaton& product, std::size_t i) {
  Witness w;
  w.kind = Violation::UnacceptedTermination;
  w.prefix = prefix_to(product, i);
  w.configurations = {product.configuration(i)};
  w.description = product.muller()
                      ? "finite maximal run under Muller acceptance ends in " + product.name(i)
                      : "run terminates in non-final configuration " + product.name(i);
  return w;
}

}  // namespace

const char* to_string(Violation v) {
  switch (v) {
    case Violation::Undeliverable: return "undeliverable";
    case Violation::EndlessChain: return "endless-chain";
    case Violation::UnacceptedTermination: return "unaccepted-termination";
    case Violation::UnacceptedInfinitySet: return "unaccepted-infinity-set";
  }
  return "unknown";
}

Verdict check_well_formed(const ProductAutomaton& product) {
  for (std::size_t i = 0; i < product.size(); ++i) {
    if (product.status(i) != ConfigStatus::Error) continue;
    Witness w;
    w.kind = Violation::Undeliverable;
    w.prefix = prefix_to(product, i);
    w.configurations = {product.configuration(i)};
    w.character = *product.protocol().route(product.configuration(i).pending);
    w.description = "character " + w.character.str() + " cannot be processed in " + product.name(i);
    return {false, std::move(w)};
  }
  return {};
}

Verdict check_interruptible(const ProductAutomaton& product) {
  // Depth-first search over the in-flight subgraph; a back edge closes a cycle.
  const std::size_t n = product.size();
  enum Color : unsigned char { White, Grey, Black };
  std::vector<Color> color(n, White);
  std::vector<std::size_t> parent_edge(n, 0);
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!product.forced(root) || color[root] != White) continue;
    std::vector<Frame> frames{{root, 0}};
    color[root] = Grey;
    while (!frames.empty()) {
      auto& f = frames.back();
      auto out = product.outgoing(f.node);
      if (f.edge == out.size()) {
        color[f.node] = Black;
        frames.pop_back();
        continue;
      }
      auto t = out[f.edge++];
      auto next = product.transitions()[t].to;
      if (!product.forced(next)) continue;
      if (color[next] == White) {
        color[next] = Grey;
        parent_edge[next] = t;
        frames.push_back({next, 0});
      } else if (color[next] == Grey) {
        // Cycle next -> ... -> f.node -> next.
        std::vector<std::size_t> edges{t};
        for (auto cur = f.node; cur != next;) {
          edges.push_back(parent_edge[cur]);
          cur = product.transitions()[parent_edge[cur]].from;
        }
        std::reverse(edges.begin(), edges.end());
        Witness w;
        w.kind = Violation::EndlessChain;
        w.prefix = prefix_to(product, next);
        for (auto e : edges) {
          w.cycle.push_back(product.transitions()[e].choice);
          w.configurations.push_back(product.configuration(product.transitions()[e].from));
        }
        w.description = "interaction chain cycles through " + std::to_string(edges.size()) +
                        " in-flight configurations starting at " + product.name(next);
        return {false, std::move(w)};
      }
    }
  }
  return {};
}

Verdict check_accepting(const ProductAutomaton& product, const Limits& limits) {
  for (std::size_t i = 0; i < product.size(); ++i) {
    if (product.status(i) != ConfigStatus::Terminal) continue;
    if (product.muller() || !product.is_final(i)) {
      return {false, unaccepted_termination(product, i)};
    }
  }
  if (!product.muller()) return {};

  // Every strongly connected set S is a realizable infinity set. If a cyclic
  // component C is accepted, a rejected S inside it has a smaller projection,
  // so it avoids some role-state value of C: search the components left after
  // removing each value in turn.
  const std::size_t n = product.size();
  std::set<std::vector<std::size_t>> visited;
  std::size_t explored = 0;
  std::function<std::optional<std::vector<std::size_t>>(const std::vector<std::size_t>&)> search =
      [&](const std::vector<std::size_t>& component) -> std::optional<std::vector<std::size_t>> {
    if (++explored > limits.max_muller_subproblems) {
      throw ResourceError("Muller check explored more than " +
                          std::to_string(limits.max_muller_subproblems) + " strongly connected sets");
    }
    if (!product.accepts_infinity_set({component.begin(), component.end()})) return component;
    for (std::size_t r = 0; r < product.protocol().role_count(); ++r) {
      std::set<Symbol> values;
      for (auto m : component) values.insert(product.configuration(m).states[r]);
      if (values.size() < 2) continue;
      for (const auto& q : values) {
        std::vector<bool> allowed(n, false);
        for (auto m : component) allowed[m] = product.configuration(m).states[r] != q;
        for (auto& sub : cyclic_components(product, allowed)) {
          if (!visited.insert(sub).second) continue;
          if (auto rejected = search(sub)) return rejected;
        }
      }
    }
    return std::nullopt;
  };

  for (auto& component : cyclic_components(product, std::vector<bool>(n, true))) {
    if (!visited.insert(component).second) continue;
    auto members = search(component);
    if (!members) continue;
    std::vector<bool> in_set(n, false);
    for (auto m : *members) in_set[m] = true;
    Witness w;
    w.kind = Violation::UnacceptedInfinitySet;
    w.prefix = prefix_to(product, members->front());
    w.cycle = covering_cycle(product, *members, in_set);
    for (auto m : *members) w.configurations.push_back(product.configuration(m));
    w.description = "realizable infinity set of " + std::to_string(members->size()) +
                    " configurations is not accepted";
    return {false, std::move(w)};
  }
  return {};
}

ConsistencyReport check_consistent(const ProductAutomaton& product, const Limits& limits) {
  ConsistencyReport report;
  report.well_formed = check_well_formed(product);
  report.interruptible = check_interruptible(product);
  report.accepting = check_accepting(product, limits);
  report.consistent =
      report.well_formed.holds && report.interruptible.holds && report.accepting.holds;
  return report;
}

Verdict check_well_formed(const Protocol& p, const Limits& limits) {
  return check_well_formed(build_product(p, limits));
}

Verdict check_interruptible(const Protocol& p, const Limits& limits) {
  return check_interruptible(build_product(p, limits));
}

Verdict check_accepting(const Protocol& p, const Limits& limits) {
  return check_accepting(build_product(p, limits), limits);
}

ConsistencyReport check_consistent(const Protocol& p, const Limits& limits) {
  return check_consistent(build_product(p, limits), limits);
}

bool replay_witness(const Protocol& p, const Witness& w) {
  auto cfg = initial_configuration(p);
  auto advance = [&](std::size_t choice, std::size_t time) {
    auto out = step(p, cfg, choice, time);
    if (out.kind != StepKind::Advanced) return false;
    cfg = std::move(out.next);
    return true;
  };
  std::size_t time = 0;
  try {
    for (auto c : w.prefix) {
      if (!advance(c, time++)) return false;
    }
    switch (w.kind) {
      case Violation::Undeliverable: {
        auto out = step(p, cfg, std::nullopt, time);
        return out.kind == StepKind::ExecutionError && out.undeliverable == w.character;
      }
      case Violation::UnacceptedTermination: {
        auto out = step(p, cfg, std::nullopt, time);
        if (out.kind != StepKind::Terminated) return false;
        if (p.uses_muller()) return true;
        for (std::size_t r = 0; r < p.role_count(); ++r) {
          const auto& fin = std::get<FiniteFinal>(p.role(r).acceptance());
          if (!fin.states.count(cfg.states[r])) return true;
        }
        return false;
      }
      case Violation::EndlessChain:
      case Violation::UnacceptedInfinitySet: {
        if (w.cycle.empty()) return false;
        const auto start = cfg;
        std::set<Configuration> visited;
        for (auto c : w.cycle) {
          visited.insert(cfg);
          if (w.kind == Violation::EndlessChain && cfg.pending.is_eps()) return false;
          if (!advance(c, time++)) return false;
        }
        if (cfg != start) return false;
        if (w.kind == Violation::EndlessChain) return true;
        for (std::size_t r = 0; r < p.role_count(); ++r) {
          std::set<Symbol> projection;
          for (const auto& v : visited) projection.insert(v.states[r]);
          if (!std::get<Muller>(p.role(r).acceptance()).sets.count(projection)) return true;
        }
        return false;
      }
    }
  } catch (const PreconditionError&) {
    return false;
  }
  return false;
}

}  // namespace gifkit
