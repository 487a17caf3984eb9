#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "gifkit/symbol.hpp"

namespace gifkit {

// One element of the transition relation: consume `input` (or nothing) in
// state `from`, emit `output` (or nothing) and move to `to`.
struct Transition {
  Symbol input;
  Symbol output;
  Symbol from;
  Symbol to;

  bool spontaneous() const { return input.is_eps(); }
  auto operator<=>(const Transition&) const = default;
};

struct FiniteFinal {
  std::set<Symbol> states;
  auto operator<=>(const FiniteFinal&) const = default;
};

// A run succeeds iff the set of states it visits infinitely often is one of
// `sets`.
struct Muller {
  std::set<std::set<Symbol>> sets;
  auto operator<=>(const Muller&) const = default;
};

using Acceptance = std::variant<FiniteFinal, Muller>;

struct InitialValue {
  Symbol state;
  Symbol output;  // may be eps
  auto operator<=>(const InitialValue&) const = default;
};

// An I/O automaton (I, O, Q, (q0, o0), Delta, Acc). Construction validates
// every invariant, so a value never refers to unknown states or characters.
class IOAutomaton {
 public:
  IOAutomaton(Alphabet inputs, Alphabet outputs, Alphabet states, InitialValue initial,
              std::vector<Transition> delta, Acceptance acceptance);

  const Alphabet& inputs() const { return inputs_; }
  const Alphabet& outputs() const { return outputs_; }
  const Alphabet& states() const { return states_; }
  const InitialValue& initial() const { return initial_; }
  // Sorted, duplicate free. Indices into this vector identify transitions.
  const std::vector<Transition>& delta() const { return delta_; }
  const Acceptance& acceptance() const { return acceptance_; }

  bool has_muller_acceptance() const { return std::holds_alternative<Muller>(acceptance_); }

  // Indices of the transitions leaving `state`.
  std::span<const std::size_t> transitions_from(const Symbol& state) const;

  // Indices of the transitions leaving `state` that consume `input`
  // (eps selects the spontaneous ones).
  std::vector<std::size_t> transitions_on(const Symbol& state, const Symbol& input) const;

  std::size_t index_of(const Transition& t) const;  // throws PreconditionError if absent

  bool operator==(const IOAutomaton& other) const;

 private:
  Alphabet inputs_;
  Alphabet outputs_;
  Alphabet states_;
  InitialValue initial_;
  std::vector<Transition> delta_;
  Acceptance acceptance_;
  std::map<Symbol, std::vector<std::size_t>> by_state_;
};

// True iff the automaton never has a choice: no spontaneous transition at all
// and at most one transition per (input, state). Every spontaneous transition
// counts as a choice point because firing it is a decision in time.
bool is_deterministic(const IOAutomaton& a);

using Renaming = std::map<Symbol, Symbol>;

// Replace names throughout the automaton. Unmapped names stay. Throws
// NamingError if the mapping is not injective on the automaton's names or
// an image collides with an unmapped name.
IOAutomaton rename_characters(const IOAutomaton& a, const Renaming& mapping);

// The inverse of an injective renaming.
Renaming invert(const Renaming& mapping);

// The values of input, output and state at one time step.
struct StateTriple {
  Symbol input;
  Symbol output;
  Symbol state;
  std::size_t time = 0;
  auto operator<=>(const StateTriple&) const = default;
};

struct ExecutionFragment {
  std::vector<StateTriple> steps;
};

// Consecutive times, and every pair of neighbouring triples is linked by a
// transition (input and source at k, output and target at k + 1).
bool is_fragment_of(const IOAutomaton& a, const ExecutionFragment& fragment);

// A fragment that starts in the initial state with the initial output.
bool is_run_of(const IOAutomaton& a, const ExecutionFragment& fragment);

// The state projection of a fragment.
std::vector<Symbol> path_of(const ExecutionFragment& fragment);

}  // namespace gifkit
