#include "gifkit/automaton.hpp"

#include <algorithm>

#include "gifkit/errors.hpp"

namespace gifkit {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

bool contains(const Alphabet& alphabet, const Symbol& s) { return alphabet.count(s) != 0; }

bool member_or_eps(const Alphabet& alphabet, const Symbol& s) {
  return s.is_eps() || contains(alphabet, s);
}

void check_no_eps(const Alphabet& alphabet, const char* what) {
  require(!contains(alphabet, Symbol::eps()), std::string(what) + " must not list eps");
}

void check_disjoint(const Alphabet& a, const Alphabet& b, const char* what) {
  for (const auto& s : a) {
    require(!contains(b, s), "symbol '" + s.str() + "' is used as " + what);
  }
}

std::set<Symbol> rename_set(const std::set<Symbol>& in, const Renaming& mapping) {
  std::set<Symbol> out;
  for (const auto& s : in) {
    auto it = mapping.find(s);
    out.insert(it == mapping.end() ? s : it->second);
  }
  return out;
}

Symbol rename_one(const Symbol& s, const Renaming& mapping) {
  if (s.is_eps()) return s;
  auto it = mapping.find(s);
  return it == mapping.end() ? s : it->second;
}

}  // namespace

IOAutomaton::IOAutomaton(Alphabet inputs, Alphabet outputs, Alphabet states, InitialValue initial,
                         std::vector<Transition> delta, Acceptance acceptance)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      delta_(std::move(delta)),
      acceptance_(std::move(acceptance)) {
  require(!states_.empty(), "the state set must not be empty");
  check_no_eps(inputs_, "the input alphabet");
  check_no_eps(outputs_, "the output alphabet");
  check_no_eps(states_, "the state set");
  check_disjoint(inputs_, outputs_, "both input and output");
  check_disjoint(inputs_, states_, "both input and state");
  check_disjoint(outputs_, states_, "both output and state");

  require(contains(states_, initial_.state),
          "initial state '" + initial_.state.str() + "' is not a state");
  require(member_or_eps(outputs_, initial_.output),
          "initial output '" + initial_.output.str() + "' is not an output character");

  std::sort(delta_.begin(), delta_.end());
  delta_.erase(std::unique(delta_.begin(), delta_.end()), delta_.end());
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    const auto& t = delta_[i];
    require(contains(states_, t.from), "transition source '" + t.from.str() + "' is not a state");
    require(contains(states_, t.to), "transition target '" + t.to.str() + "' is not a state");
    require(member_or_eps(inputs_, t.input),
            "transition input '" + t.input.str() + "' is not an input character");
    require(member_or_eps(outputs_, t.output),
            "transition output '" + t.output.str() + "' is not an output character");
    by_state_[t.from].push_back(i);
  }

  if (const auto* fin = std::get_if<FiniteFinal>(&acceptance_)) {
    for (const auto& s : fin->states) {
      require(contains(states_, s), "final state '" + s.str() + "' is not a state");
    }
  } else {
    for (const auto& set : std::get<Muller>(acceptance_).sets) {
      require(!set.empty(), "Muller sets must not be empty");
      for (const auto& s : set) {
        require(contains(states_, s), "Muller set member '" + s.str() + "' is not a state");
      }
    }
  }
}

std::span<const std::size_t> IOAutomaton::transitions_from(const Symbol& state) const {
  auto it = by_state_.find(state);
  if (it == by_state_.end()) return {};
  return it->second;
}

std::vector<std::size_t> IOAutomaton::transitions_on(const Symbol& state,
                                                     const Symbol& input) const {
  std::vector<std::size_t> result;
  for (auto i : transitions_from(state)) {
    if (delta_[i].input == input) result.push_back(i);
  }
  return result;
}

std::size_t IOAutomaton::index_of(const Transition& t) const {
  auto it = std::lower_bound(delta_.begin(), delta_.end(), t);
  if (it == delta_.end() || *it != t) {
    throw PreconditionError("transition " + t.from.str() + " -- " + t.input.str() + " / " +
                            t.output.str() + " --> " + t.to.str() + " does not exist");
  }
  return static_cast<std::size_t>(it - delta_.begin());
}

bool IOAutomaton::operator==(const IOAutomaton& other) const {
  return inputs_ == other.inputs_ && outputs_ == other.outputs_ && states_ == other.states_ &&
         initial_ == other.initial_ && delta_ == other.delta_ && acceptance_ == other.acceptance_;
}

bool is_deterministic(const IOAutomaton& a) {
  std::set<std::pair<Symbol, Symbol>> seen;
  for (const auto& t : a.delta()) {
    if (t.spontaneous()) return false;
    if (!seen.emplace(t.input, t.from).second) return false;
  }
  return true;
}

IOAutomaton rename_characters(const IOAutomaton& a, const Renaming& mapping) {
  std::set<Symbol> names;
  names.insert(a.inputs().begin(), a.inputs().end());
  names.insert(a.outputs().begin(), a.outputs().end());
  names.insert(a.states().begin(), a.states().end());

  std::map<Symbol, Symbol> image_of;
  for (const auto& [from, to] : mapping) {
    if (from.is_eps() || to.is_eps()) throw NamingError("eps cannot be renamed");
  }
  for (const auto& n : names) {
    Symbol target = rename_one(n, mapping);
    auto [it, inserted] = image_of.emplace(target, n);
    if (!inserted) {
      throw NamingError("renaming maps both '" + it->second.str() + "' and '" + n.str() +
                        "' to '" + target.str() + "'");
    }
  }

  std::vector<Transition> delta;
  delta.reserve(a.delta().size());
  for (const auto& t : a.delta()) {
    delta.push_back({rename_one(t.input, mapping), rename_one(t.output, mapping),
                     rename_one(t.from, mapping), rename_one(t.to, mapping)});
  }
  Acceptance acceptance;
  if (const auto* fin = std::get_if<FiniteFinal>(&a.acceptance())) {
    acceptance = FiniteFinal{rename_set(fin->states, mapping)};
  } else {
    Muller m;
    for (const auto& set : std::get<Muller>(a.acceptance()).sets) {
      m.sets.insert(rename_set(set, mapping));
    }
    acceptance = std::move(m);
  }
  return IOAutomaton(rename_set(a.inputs(), mapping), rename_set(a.outputs(), mapping),
                     rename_set(a.states(), mapping),
                     {rename_one(a.initial().state, mapping), rename_one(a.initial().output, mapping)},
                     std::move(delta), std::move(acceptance));
}

Renaming invert(const Renaming& mapping) {
  Renaming inverse;
  for (const auto& [from, to] : mapping) {
    if (!inverse.emplace(to, from).second) {
      throw NamingError("renaming is not injective at '" + to.str() + "'");
    }
  }
  return inverse;
}

bool is_fragment_of(const IOAutomaton& a, const ExecutionFragment& fragment) {
  const auto& steps = fragment.steps;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& cur = steps[k];
    if (!a.states().count(cur.state)) return false;
    if (!cur.input.is_eps() && !a.inputs().count(cur.input)) return false;
    if (!cur.output.is_eps() && !a.outputs().count(cur.output)) return false;
    if (k + 1 == steps.size()) break;
    const auto& next = steps[k + 1];
    if (next.time != cur.time + 1) return false;
    Transition link{cur.input, next.output, cur.state, next.state};
    if (!std::binary_search(a.delta().begin(), a.delta().end(), link)) return false;
  }
  return true;
}

bool is_run_of(const IOAutomaton& a, const ExecutionFragment& fragment) {
  if (fragment.steps.empty()) return false;
  const auto& first = fragment.steps.front();
  return first.time == 0 && first.state == a.initial().state &&
         first.output == a.initial().output && is_fragment_of(a, fragment);
}

std::vector<Symbol> path_of(const ExecutionFragment& fragment) {
  std::vector<Symbol> path;
  path.reserve(fragment.steps.size());
  for (const auto& s : fragment.steps) path.push_back(s.state);
  return path;
}

}  // namespace gifkit
