#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gifkit/gif.hpp"

namespace gifkit {

// Every configuration reachable from `seed` without taking a decision.
struct EpsilonDecisionClosure {
  std::size_t seed = 0;
  std::set<std::size_t> members;
  auto operator<=>(const EpsilonDecisionClosure&) const = default;
};

EpsilonDecisionClosure epsilon_closure(const Gif& g, std::size_t cfg);
// Throws PreconditionError if `cfg` is not reachable.
EpsilonDecisionClosure epsilon_closure(const Gif& g, const Configuration& cfg);

struct GdfState {
  std::set<std::size_t> members;
  std::vector<std::size_t> seeds;  // closures merged into this state
  bool accepting = false;
};

// Two closures that share configurations although neither contains the
// other. The construction merges them.
struct PartitionViolation {
  std::size_t seed_a = 0;
  std::size_t seed_b = 0;
};

// The reduced decision automaton: states are (merged) epsilon-decision
// closures, inputs are the decisions, and it is deterministic.
struct Gdf {
  std::vector<GdfState> states;  // numbered in breadth-first order from the initial state
  std::set<Symbol> inputs;
  std::map<std::pair<std::size_t, Symbol>, std::size_t> delta;  // (state, decision) -> state
  std::size_t initial = 0;
  std::vector<PartitionViolation> partition_violations;

  // GDF state containing a product configuration.
  std::size_t state_of(std::size_t cfg) const;
  std::size_t edge_count() const { return delta.size(); }

  std::vector<std::size_t> state_of_config;
};

Gdf build_gdf(const Gif& g);

// Source configuration -> closure of the target, for every reachable use of
// the decision.
struct DecisionMeaning {
  Symbol decision;
  std::map<std::size_t, EpsilonDecisionClosure> by_source;

  // The distinct target closures (as member sets).
  std::set<std::set<std::size_t>> targets() const;
  // The single target closure when every use agrees.
  std::optional<EpsilonDecisionClosure> unique() const;
};

// Throws PreconditionError for names that are not used decisions.
DecisionMeaning abstract_meaning_of_decision(const Gif& g, const Symbol& d);

// Equal sets of target closures.
bool decisions_equivalent(const Gif& g, const Symbol& d1, const Symbol& d2);

// Selection decisions that accompany delivering `input` at `cfg`; empty if
// the continuation is unique. Throws PreconditionError if `input` is not the
// character delivered at `cfg`.
std::set<Symbol> enforced_selections(const Gif& g, const RoleChar& input, std::size_t cfg);

// Same abstract meaning: the multisets of target closures of the enforced
// selections coincide.
bool characters_same_meaning(const Gif& g, const RoleChar& i1, std::size_t p1,
                             const RoleChar& i2, std::size_t p2);

// The stricter, configuration-free variant: same meaning for every pair of
// configurations where the characters are delivered. Throws
// PreconditionError if a character is never delivered.
bool characters_same_meaning_everywhere(const Gif& g, const RoleChar& i1, const RoleChar& i2);

struct Meaning {
  RoleChar output;
  std::size_t config = 0;
  auto operator<=>(const Meaning&) const = default;
};

// The meaning of two interpretations in sequence: the second one's result
// when they are consecutive (the second starts where the first ends),
// nullopt (non-compositional) otherwise.
std::optional<Meaning> compose_meaning(const Gif& g, const Interpretation& m1,
                                       const Interpretation& m2);

}  // namespace gifkit
