#include "gifkit/protocol.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "gifkit/errors.hpp"

namespace gifkit {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

}  // namespace

RoleChar parse_role_char(std::string_view text) {
  text = trim(text);
  if (text == "eps") return RoleChar::eps();
  auto dot = text.find('.');
  if (dot == std::string_view::npos || !is_identifier(text.substr(0, dot)) ||
      !is_identifier(text.substr(dot + 1))) {
    throw PreconditionError("expected 'eps' or 'Role.character', got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, dot)), Symbol(std::string(text.substr(dot + 1)))};
}

Protocol::Protocol(std::string name, std::map<RoleId, IOAutomaton> roles,
                   std::set<Channel> channels)
    : name_(std::move(name)), channels_(std::move(channels)) {
  if (!is_identifier(name_)) throw ValidationError("invalid protocol name '" + name_ + "'");
  if (roles.empty()) throw ValidationError("a protocol needs at least one role");
  for (auto& [id, automaton] : roles) {
    if (!is_identifier(id)) throw ValidationError("invalid role id '" + id + "'");
    roles_.emplace_back(id, std::move(automaton));
  }

  for (const auto& ch : channels_) {
    if (!has_role(ch.sender) || !has_role(ch.receiver)) {
      throw ValidationError("channel " + ch.sender + " -> " + ch.receiver +
                            " names an unknown role");
    }
    if (ch.sender == ch.receiver) {
      throw ValidationError("channel " + ch.sender + " -> " + ch.receiver +
                            " connects a role to itself");
    }
    const auto& out = role(ch.sender).outputs();
    const auto& in = role(ch.receiver).inputs();
    bool carries = false;
    for (const auto& c : out) {
      if (!in.count(c)) continue;
      carries = true;
      auto [it, inserted] = routes_.emplace(RoleChar{ch.sender, c}, ch.receiver);
      if (!inserted) {
        throw ValidationError("character " + ch.sender + "." + c.name() +
                              " is routed to both " + it->second + " and " + ch.receiver);
      }
    }
    if (!carries) {
      throw ValidationError("channel " + ch.sender + " -> " + ch.receiver +
                            " carries no character: no output of the sender is an input of "
                            "the receiver");
    }
  }

  std::size_t speaking = 0;
  std::size_t muller = 0;
  for (const auto& [id, a] : roles_) {
    if (!a.initial().output.is_eps()) ++speaking;
    if (a.has_muller_acceptance()) ++muller;
  }
  if (speaking > 1) {
    throw ValidationError("at most one role may start with a nonempty output");
  }
  if (muller != 0 && muller != roles_.size()) {
    throw ValidationError("roles mix finite and Muller acceptance");
  }
}

std::size_t Protocol::role_index(const RoleId& id) const {
  auto it = std::lower_bound(roles_.begin(), roles_.end(), id,
                             [](const auto& entry, const RoleId& key) { return entry.first < key; });
  if (it == roles_.end() || it->first != id) throw PreconditionError("unknown role '" + id + "'");
  return static_cast<std::size_t>(it - roles_.begin());
}

bool Protocol::has_role(const RoleId& id) const {
  auto it = std::lower_bound(roles_.begin(), roles_.end(), id,
                             [](const auto& entry, const RoleId& key) { return entry.first < key; });
  return it != roles_.end() && it->first == id;
}

std::optional<RoleChar> Protocol::route(const RoleChar& output) const {
  auto it = routes_.find(output);
  if (it == routes_.end()) return std::nullopt;
  return RoleChar{it->second, output.ch};
}

bool Protocol::uses_muller() const { return roles_.front().second.has_muller_acceptance(); }

bool Protocol::operator==(const Protocol& other) const {
  return name_ == other.name_ && roles_ == other.roles_ && channels_ == other.channels_;
}

Protocol rename_protocol(const Protocol& p, const Renaming& mapping) {
  std::map<RoleId, IOAutomaton> roles;
  for (const auto& [id, a] : p.roles()) roles.emplace(id, rename_characters(a, mapping));
  return Protocol(p.name(), std::move(roles), p.channels());
}

bool check_closed(const Protocol& p) {
  for (const auto& [id, a] : p.roles()) {
    for (const auto& c : a.outputs()) {
      if (!p.route({id, c})) return false;
    }
    for (const auto& c : a.inputs()) {
      bool fed = false;
      for (const auto& ch : p.channels()) {
        if (ch.receiver == id && p.role(ch.sender).outputs().count(c)) {
          fed = true;
          break;
        }
      }
      if (!fed) return false;
    }
  }
  return true;
}

Configuration initial_configuration(const Protocol& p) {
  Configuration cfg;
  for (const auto& [id, a] : p.roles()) {
    cfg.states.push_back(a.initial().state);
    if (!a.initial().output.is_eps()) cfg.pending = {id, a.initial().output};
  }
  return cfg;
}

std::string to_string(const Protocol& p, const Configuration& cfg) {
  std::string text;
  for (std::size_t r = 0; r < cfg.states.size(); ++r) {
    if (r) text += ',';
    text += p.role_id(r) + "." + cfg.states[r].str();
  }
  if (!cfg.pending.is_eps()) text += "|" + cfg.pending.str();
  return text;
}

Configuration parse_configuration(const Protocol& p, std::string_view text) {
  auto bar = text.find('|');
  Configuration cfg;
  cfg.states.resize(p.role_count());
  std::vector<bool> seen(p.role_count(), false);
  for (auto part : split(text.substr(0, bar), ',')) {
    auto entry = parse_role_char(part);
    if (entry.is_eps() || !p.has_role(entry.role)) {
      throw PreconditionError("bad configuration entry '" + std::string(trim(part)) + "'");
    }
    auto r = p.role_index(entry.role);
    if (seen[r]) throw PreconditionError("role " + entry.role + " appears twice in configuration");
    if (!p.role(r).states().count(entry.ch)) {
      throw PreconditionError("'" + entry.ch.str() + "' is not a state of role " + entry.role);
    }
    seen[r] = true;
    cfg.states[r] = entry.ch;
  }
  for (std::size_t r = 0; r < seen.size(); ++r) {
    if (!seen[r]) throw PreconditionError("configuration lacks role " + p.role_id(r));
  }
  if (bar != std::string_view::npos) {
    cfg.pending = parse_role_char(text.substr(bar + 1));
    if (!cfg.pending.is_eps() &&
        (!p.has_role(cfg.pending.role) || !p.role(cfg.pending.role).outputs().count(cfg.pending.ch))) {
      throw PreconditionError("'" + cfg.pending.str() + "' is not an output character");
    }
  }
  return cfg;
}

Enabled enabled_choices(const Protocol& p, const Configuration& cfg) {
  Enabled result;
  auto make_choice = [&](std::size_t r, std::size_t local, RoleChar input) {
    const auto& t = p.role(r).delta()[local];
    Choice c;
    c.role = r;
    c.local = local;
    c.input = std::move(input);
    c.output = t.output.is_eps() ? RoleChar::eps() : RoleChar{p.role_id(r), t.output};
    c.next = cfg;
    c.next.states[r] = t.to;
    c.next.pending = c.output;
    return c;
  };

  if (!cfg.pending.is_eps()) {
    if (auto delivered = p.route(cfg.pending)) {
      result.forced = true;
      result.forced_input = *delivered;
      auto r = p.role_index(delivered->role);
      for (auto local : p.role(r).transitions_on(cfg.states[r], delivered->ch)) {
        result.choices.push_back(make_choice(r, local, *delivered));
      }
      return result;
    }
    // An unrouted character leaves the protocol; only open protocols have them.
  }
  for (std::size_t r = 0; r < p.role_count(); ++r) {
    for (auto local : p.role(r).transitions_on(cfg.states[r], Symbol::eps())) {
      result.choices.push_back(make_choice(r, local, RoleChar::eps()));
    }
  }
  return result;
}

StepOutcome step(const Protocol& p, const Configuration& cfg, std::optional<std::size_t> choice,
                 std::size_t time) {
  auto enabled = enabled_choices(p, cfg);
  StepOutcome out;
  out.emitted.time = time;
  out.emitted.output = cfg.pending;
  out.emitted.cfg = cfg;
  if (enabled.undeliverable()) {
    out.kind = StepKind::ExecutionError;
    out.undeliverable = enabled.forced_input;
    out.emitted.input = enabled.forced_input;
    return out;
  }
  if (enabled.terminal()) {
    out.kind = StepKind::Terminated;
    return out;
  }
  std::size_t index = 0;
  if (choice) {
    index = *choice;
    if (index >= enabled.choices.size()) {
      throw PreconditionError("choice " + std::to_string(index) + " out of range: " +
                              std::to_string(enabled.choices.size()) + " alternatives at " +
                              to_string(p, cfg));
    }
  } else if (enabled.choices.size() > 1) {
    throw PreconditionError("a choice is required at " + to_string(p, cfg));
  }
  auto& picked = enabled.choices[index];
  out.kind = StepKind::Advanced;
  out.choice = index;
  out.emitted.input = picked.input;
  out.next = std::move(picked.next);
  return out;
}

std::optional<std::size_t> ProductAutomaton::find(const Configuration& cfg) const {
  auto it = index_.find(cfg);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ProductAutomaton::index_of(const Configuration& cfg) const {
  auto found = find(cfg);
  if (!found) {
    throw PreconditionError("configuration " + to_string(*protocol_, cfg) + " is not reachable");
  }
  return *found;
}

bool ProductAutomaton::is_final(std::size_t index) const {
  const auto& cfg = configs_[index];
  for (std::size_t r = 0; r < cfg.states.size(); ++r) {
    const auto* fin = std::get_if<FiniteFinal>(&protocol_->role(r).acceptance());
    if (!fin || !fin->states.count(cfg.states[r])) return false;
  }
  return true;
}

bool ProductAutomaton::accepts_infinity_set(const std::set<std::size_t>& set) const {
  for (std::size_t r = 0; r < protocol_->role_count(); ++r) {
    const auto* muller = std::get_if<Muller>(&protocol_->role(r).acceptance());
    if (!muller) return false;
    std::set<Symbol> projection;
    for (auto i : set) projection.insert(configs_[i].states[r]);
    if (!muller->sets.count(projection)) return false;
  }
  return true;
}

bool ProductAutomaton::in_acceptance_component(std::size_t index) const {
  if (!muller()) return is_final(index);
  const auto& cfg = configs_[index];
  for (std::size_t r = 0; r < cfg.states.size(); ++r) {
    const auto& sets = std::get<Muller>(protocol_->role(r).acceptance()).sets;
    bool found = std::any_of(sets.begin(), sets.end(),
                             [&](const auto& s) { return s.count(cfg.states[r]) != 0; });
    if (!found) return false;
  }
  return true;
}

ProductAutomaton build_product(const Protocol& p, const Limits& limits) {
  if (!check_closed(p)) throw PreconditionError("protocol " + p.name() + " is not closed");
  ProductAutomaton product;
  product.protocol_ = std::make_shared<const Protocol>(p);

  auto intern = [&](const Configuration& cfg) {
    auto [it, inserted] = product.index_.emplace(cfg, product.configs_.size());
    if (inserted) {
      if (product.configs_.size() >= limits.max_configurations) {
        throw ResourceError("more than " + std::to_string(limits.max_configurations) +
                            " reachable configurations (raise --max-states)");
      }
      product.configs_.push_back(cfg);
    }
    return it->second;
  };

  intern(initial_configuration(p));
  for (std::size_t i = 0; i < product.configs_.size(); ++i) {
    auto enabled = enabled_choices(p, product.configs_[i]);
    product.outgoing_.emplace_back();
    product.status_.push_back(enabled.undeliverable() ? ConfigStatus::Error
                              : enabled.terminal()    ? ConfigStatus::Terminal
                                                      : ConfigStatus::Live);
    for (std::size_t c = 0; c < enabled.choices.size(); ++c) {
      auto& choice = enabled.choices[c];
      auto target = intern(choice.next);
      product.outgoing_[i].push_back(product.transitions_.size());
      product.transitions_.push_back(
          {i, target, choice.input, choice.output, choice.role, choice.local, c});
    }
  }
  return product;
}

namespace {

struct RunWalker {
  const Protocol& p;
  std::size_t max_depth;
  RunEnumeration mode;
  const std::function<void(const Run&)>& visit;
  const Limits& limits;
  std::size_t emitted = 0;
  Run run;
  std::map<Configuration, std::size_t> on_path;

  void emit(RunEnd end, const StepOutcome& last) {
    if (++emitted > limits.max_runs) {
      throw ResourceError("more than " + std::to_string(limits.max_runs) + " runs");
    }
    run.steps.push_back(last.emitted);
    run.end = end;
    visit(run);
    run.steps.pop_back();
  }

  void walk(const Configuration& cfg, std::size_t depth) {
    auto probe = step(p, cfg, std::size_t{0}, depth);
    if (probe.kind == StepKind::Terminated) return emit(RunEnd::Terminated, probe);
    if (probe.kind == StepKind::ExecutionError) return emit(RunEnd::ExecutionError, probe);
    if (mode == RunEnumeration::StopAtRepeat && on_path[cfg] > 1) {
      return emit(RunEnd::Repeated, probe_without_input(probe));
    }
    if (depth == max_depth) return emit(RunEnd::DepthCutoff, probe_without_input(probe));

    auto enabled = enabled_choices(p, cfg);
    for (std::size_t c = 0; c < enabled.choices.size(); ++c) {
      auto& next = enabled.choices[c].next;
      RunStep here = probe.emitted;
      here.input = enabled.choices[c].input;
      run.steps.push_back(here);
      run.choices.push_back(c);
      ++on_path[next];
      walk(next, depth + 1);
      if (--on_path[next] == 0) on_path.erase(next);
      run.choices.pop_back();
      run.steps.pop_back();
    }
  }

  // A run that stops before consuming anything records no input.
  static StepOutcome probe_without_input(StepOutcome probe) {
    probe.emitted.input = RoleChar::eps();
    return probe;
  }
};

}  // namespace

void for_each_run(const Protocol& p, std::size_t max_depth, RunEnumeration mode,
                  const std::function<void(const Run&)>& visit, const Limits& limits) {
  RunWalker walker{p, max_depth, mode, visit, limits, 0, {}, {}};
  auto start = initial_configuration(p);
  walker.on_path[start] = 1;
  walker.walk(start, 0);
}

std::vector<Run> enumerate_runs(const Protocol& p, std::size_t max_depth, RunEnumeration mode,
                                const Limits& limits) {
  std::vector<Run> runs;
  for_each_run(p, max_depth, mode, [&](const Run& r) { runs.push_back(r); }, limits);
  return runs;
}

Run replay_choices(const Protocol& p, std::span<const std::size_t> choices) {
  Run run;
  auto cfg = initial_configuration(p);
  for (std::size_t k = 0; k < choices.size(); ++k) {
    auto out = step(p, cfg, choices[k], k);
    if (out.kind != StepKind::Advanced) {
      throw PreconditionError("replay stopped after " + std::to_string(k) + " steps");
    }
    run.steps.push_back(out.emitted);
    run.choices.push_back(choices[k]);
    cfg = std::move(out.next);
  }
  auto last = step(p, cfg, std::size_t{0}, choices.size());
  if (last.kind == StepKind::Advanced) {
    last.emitted.input = RoleChar::eps();
    run.end = RunEnd::DepthCutoff;
  } else {
    run.end = last.kind == StepKind::Terminated ? RunEnd::Terminated : RunEnd::ExecutionError;
  }
  run.steps.push_back(last.emitted);
  return run;
}

std::vector<InteractionChain> interaction_chains(const ProductAutomaton& product,
                                                 const Limits& limits) {
  std::vector<InteractionChain> chains;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(product.size(), false);
  const auto& ts = product.transitions();

  // Extends the chain whose last transition is path.back().
  std::function<void()> extend = [&]() {
    if (chains.size() > limits.max_runs) {
      throw ResourceError("more than " + std::to_string(limits.max_runs) + " interaction chains");
    }
    const auto& last = ts[path.back()];
    if (last.output.is_eps() || product.outgoing(last.to).empty()) {
      chains.push_back({path, false});
      return;
    }
    if (on_path[last.to]) {
      chains.push_back({path, true});
      return;
    }
    on_path[last.to] = true;
    for (auto t : product.outgoing(last.to)) {
      path.push_back(t);
      extend();
      path.pop_back();
    }
    on_path[last.to] = false;
  };

  for (std::size_t i = 0; i < product.size(); ++i) {
    if (product.forced(i)) continue;
    for (auto t : product.outgoing(i)) {
      on_path[i] = true;
      path.assign(1, t);
      extend();
      on_path[i] = false;
    }
  }
  return chains;
}

std::vector<InteractionChain> interaction_chains(const Protocol& p, const Limits& limits) {
  return interaction_chains(build_product(p, limits), limits);
}

}  // namespace gifkit
