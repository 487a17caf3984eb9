#include "gifkit/gif.hpp"

#include <algorithm>

#include "gifkit/errors.hpp"

namespace gifkit {

namespace {

Symbol renamed(const Symbol& s, const Renaming& mapping) {
  auto it = mapping.find(s);
  return it == mapping.end() ? s : it->second;
}

std::set<Symbol> all_names(const Protocol& p) {
  std::set<Symbol> names;
  for (const auto& [id, a] : p.roles()) {
    names.insert(a.inputs().begin(), a.inputs().end());
    names.insert(a.outputs().begin(), a.outputs().end());
    names.insert(a.states().begin(), a.states().end());
  }
  return names;
}

bool needs_decision(const IOAutomaton& a, const Transition& t) {
  return t.spontaneous() || a.transitions_on(t.from, t.input).size() > 1;
}

std::string describe(const TransitionRef& ref) {
  const auto& t = ref.transition;
  return ref.role + ": " + t.from.str() + " -- " + t.input.str() + " / " + t.output.str() +
         " --> " + t.to.str();
}

}  // namespace

const char* to_string(DecisionKind kind) {
  return kind == DecisionKind::Spontaneous ? "spontaneous" : "selection";
}

DecisionLabels rename_labels(const DecisionLabels& labels, const Renaming& mapping) {
  DecisionLabels out;
  for (const auto& [ref, name] : labels) {
    const auto& t = ref.transition;
    TransitionRef moved{ref.role,
                        {t.input.is_eps() ? t.input : renamed(t.input, mapping),
                         t.output.is_eps() ? t.output : renamed(t.output, mapping),
                         renamed(t.from, mapping), renamed(t.to, mapping)}};
    out.emplace(std::move(moved), name);
  }
  return out;
}

const std::vector<std::size_t>& Gif::uses(const Symbol& d) const {
  auto it = uses_.find(d);
  if (it == uses_.end()) throw PreconditionError("'" + d.str() + "' is not a decision of this GIF");
  return it->second;
}

bool Gif::awaits_decision(std::size_t cfg) const {
  auto out = product_.outgoing(cfg);
  return !out.empty() && !decision_of_[out.front()].is_eps();
}

std::vector<Symbol> Gif::enabled_decisions(std::size_t cfg) const {
  std::vector<Symbol> result;
  for (auto t : product_.outgoing(cfg)) {
    if (!decision_of_[t].is_eps()) result.push_back(decision_of_[t]);
  }
  return result;
}

Gif derive_decisions(const Protocol& p, const DecisionLabels& labels, const Limits& limits) {
  auto product = build_product(p, limits);
  auto report = check_consistent(product, limits);
  if (!report.consistent) {
    for (const auto* v : {&report.well_formed, &report.interruptible, &report.accepting}) {
      if (!v->holds) {
        throw PreconditionError("protocol " + p.name() + " is not consistent: " +
                                v->witness->description);
      }
    }
  }

  const auto reserved = all_names(p);
  std::set<Symbol> taken;
  std::map<std::pair<std::size_t, std::size_t>, Symbol> label_of;  // (role, local) -> name
  for (const auto& [ref, name] : labels) {
    if (!is_identifier(name.name())) {
      throw NamingError("invalid decision label '" + name.str() + "'");
    }
    if (!p.has_role(ref.role)) {
      throw NamingError("label " + name.str() + " refers to unknown role " + ref.role);
    }
    auto r = p.role_index(ref.role);
    std::size_t local;
    try {
      local = p.role(r).index_of(ref.transition);
    } catch (const PreconditionError&) {
      throw NamingError("label " + name.str() + " refers to a missing transition " + describe(ref));
    }
    if (!needs_decision(p.role(r), ref.transition)) {
      throw NamingError("label " + name.str() + " is attached to " + describe(ref) +
                        ", which leaves no choice");
    }
    if (reserved.count(name)) {
      throw NamingError("decision label " + name.str() +
                        " collides with a character or state name");
    }
    if (!taken.insert(name).second) {
      throw NamingError("decision label " + name.str() + " is used twice");
    }
    label_of[{r, local}] = name;
  }

  // Names for every transition that needs a decision, reachable or not.
  std::map<std::pair<std::size_t, std::size_t>, Decision> decision_for;
  for (std::size_t r = 0; r < p.role_count(); ++r) {
    const auto& a = p.role(r);
    std::map<Symbol, std::size_t> counter;
    for (const auto& from : a.states()) {
      for (auto local : a.transitions_from(from)) {
        const auto& t = a.delta()[local];
        if (!needs_decision(a, t)) continue;
        Decision d;
        d.kind = t.spontaneous() ? DecisionKind::Spontaneous : DecisionKind::Selection;
        d.owner = p.role_id(r);
        auto n = counter[from]++;
        if (auto it = label_of.find({r, local}); it != label_of.end()) {
          d.name = it->second;
        } else {
          std::string base = "D_" + p.role_id(r) + "_" + from.name() + "_" + std::to_string(n);
          std::string candidate = base;
          for (std::size_t k = 1; reserved.count(Symbol(candidate)) || taken.count(Symbol(candidate));
               ++k) {
            candidate = base + "_" + std::to_string(k);
          }
          d.name = Symbol(candidate);
          taken.insert(d.name);
        }
        decision_for.emplace(std::make_pair(r, local), std::move(d));
      }
    }
  }

  Gif g(std::move(product));
  const auto& ts = g.product_.transitions();
  g.decision_of_.resize(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    Symbol d;
    if (auto it = decision_for.find({t.role, t.local}); it != decision_for.end()) {
      d = it->second.name;
      g.decisions_.emplace(d, it->second);
      g.uses_[d].push_back(i);
    }
    g.decision_of_[i] = d;
    auto [pos, inserted] = g.delta_.emplace(GifKey{t.input, d, t.from}, GifImage{t.output, t.to, i});
    if (!inserted) {
      throw std::logic_error("decision assignment left two transitions with key (" +
                             t.input.str() + ", " + d.str() + ", " + g.product_.name(t.from) + ")");
    }
  }
  return g;
}

Interpretation interpret(const Gif& g, std::size_t cfg, const RoleChar& input,
                         const Symbol& decision) {
  auto it = g.delta_prime().find(GifKey{input, decision, cfg});
  if (it == g.delta_prime().end()) {
    throw NoSuchTransitionError("no transition for input " + input.str() + " and decision " +
                                decision.str() + " at " +
                                (cfg < g.product().size() ? g.product().name(cfg)
                                                          : "configuration #" + std::to_string(cfg)));
  }
  return {cfg, input, decision, it->second.output, it->second.config};
}

std::vector<Interpretation> all_interpretations(const Gif& g) {
  std::vector<Interpretation> out;
  out.reserve(g.delta_prime().size());
  for (const auto& [key, image] : g.delta_prime()) {
    out.push_back({key.config, key.input, key.decision, image.output, image.config});
  }
  return out;
}

namespace {

class Replayer {
 public:
  Replayer(const Gif& g, std::size_t start) : g_(g), cfg_(start) {}

  std::size_t cfg() const { return cfg_; }
  std::size_t time() const { return time_; }

  // Takes every step that needs no decision.
  void settle(Run& run) {
    while (true) {
      if (g_.product().status(cfg_) == ConfigStatus::Error) {
        throw ExecutionFailure("forced input cannot be processed at " + g_.product().name(cfg_));
      }
      auto out = g_.product().outgoing(cfg_);
      if (out.empty() || !g_.decision_of(out.front()).is_eps()) return;
      take(run, out.front());
    }
  }

  void consume(Run& run, const Symbol& d, std::size_t position) {
    for (auto t : g_.product().outgoing(cfg_)) {
      if (g_.decision_of(t) == d) {
        take(run, t);
        return;
      }
    }
    throw NotEnabledError(position, "decision " + d.str() + " at position " +
                                        std::to_string(position) + " is not enabled at " +
                                        g_.product().name(cfg_));
  }

  void finish(Run& run) const {
    RunStep last;
    last.time = time_;
    last.cfg = g_.product().configuration(cfg_);
    last.output = last.cfg.pending;
    run.steps.push_back(std::move(last));
    run.end = g_.product().status(cfg_) == ConfigStatus::Terminal ? RunEnd::Terminated
                                                                 : RunEnd::DepthCutoff;
  }

 private:
  void take(Run& run, std::size_t t) {
    const auto& tr = g_.product().transitions()[t];
    RunStep s;
    s.time = time_++;
    s.cfg = g_.product().configuration(cfg_);
    s.output = s.cfg.pending;
    s.input = tr.input;
    s.decision = g_.decision_of(t);
    run.steps.push_back(std::move(s));
    run.choices.push_back(tr.choice);
    cfg_ = tr.to;
  }

  const Gif& g_;
  std::size_t cfg_;
  std::size_t time_ = 0;
};

}  // namespace

GifRun run_gif(const Gif& g, const DecisionSequence& seq, std::optional<std::size_t> start) {
  auto origin = start.value_or(g.product().initial());
  if (origin >= g.product().size()) throw PreconditionError("start configuration is not reachable");
  Replayer replay(g, origin);
  GifRun result;
  std::size_t position = 0;
  replay.settle(result.prefix);
  for (const auto& d : seq.prefix) {
    replay.consume(result.prefix, d, ++position);
    replay.settle(result.prefix);
  }
  if (!seq.lasso()) {
    replay.finish(result.prefix);
    return result;
  }

  // Iterate the cycle until a boundary configuration repeats; the run is
  // deterministic, so it is periodic from there on.
  std::map<std::size_t, std::size_t> boundary_seen;
  std::vector<Run> iterations;
  while (!boundary_seen.count(replay.cfg())) {
    boundary_seen.emplace(replay.cfg(), iterations.size());
    Run piece;
    for (const auto& d : seq.cycle) {
      replay.consume(piece, d, ++position);
      replay.settle(piece);
    }
    iterations.push_back(std::move(piece));
  }
  auto period_start = boundary_seen.at(replay.cfg());
  Run cycle;
  for (std::size_t k = 0; k < iterations.size(); ++k) {
    auto& target = k < period_start ? result.prefix : cycle;
    target.steps.insert(target.steps.end(), iterations[k].steps.begin(), iterations[k].steps.end());
    target.choices.insert(target.choices.end(), iterations[k].choices.begin(),
                          iterations[k].choices.end());
  }
  for (const auto& s : cycle.steps) result.infinity_set.insert(g.product().index_of(s.cfg));
  cycle.end = RunEnd::Repeated;
  result.prefix.end = RunEnd::Repeated;
  result.cycle = std::move(cycle);
  return result;
}

bool fulfills(const Gif& g, std::size_t start, const DecisionSequence& seq) {
  const bool muller = g.product().muller();
  if (muller && !seq.lasso()) {
    throw IllPosedQuery("Muller acceptance only judges infinite runs; give a cycle");
  }
  if (!muller && seq.lasso()) {
    throw IllPosedQuery("finite acceptance only judges finite runs; drop the cycle");
  }
  GifRun run;
  try {
    run = run_gif(g, seq, start);
  } catch (const NotEnabledError&) {
    return false;
  } catch (const ExecutionFailure&) {
    return false;
  }
  if (muller) return g.product().accepts_infinity_set(run.infinity_set);
  auto last = g.product().index_of(run.prefix.steps.back().cfg);
  return g.product().status(last) == ConfigStatus::Terminal && g.product().is_final(last);
}

}  // namespace gifkit
