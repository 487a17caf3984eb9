#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gifkit/protocol.hpp"

namespace gifkit {

enum class Violation {
  Undeliverable,           // a forced input has no consuming transition
  EndlessChain,            // in-flight configurations form a cycle
  UnacceptedTermination,   // a maximal finite run is not accepted
  UnacceptedInfinitySet,   // a realizable infinity set is not accepted
};

const char* to_string(Violation v);

// A replayable counterexample. `prefix` drives step() from the initial
// configuration to the offending configuration; for cyclic violations
// `cycle` then leads back to it.
struct Witness {
  Violation kind = Violation::Undeliverable;
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
  std::vector<Configuration> configurations;  // offending configuration, or the cycle's
  RoleChar character;                         // Undeliverable only
  std::string description;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;
};

struct ConsistencyReport {
  Verdict well_formed;
  Verdict interruptible;
  Verdict accepting;
  bool consistent = true;
};

Verdict check_well_formed(const ProductAutomaton& product);
Verdict check_interruptible(const ProductAutomaton& product);
// Throws ResourceError when the Muller check visits more than
// limits.max_muller_subproblems strongly connected sets.
Verdict check_accepting(const ProductAutomaton& product, const Limits& limits = {});
ConsistencyReport check_consistent(const ProductAutomaton& product, const Limits& limits = {});

Verdict check_well_formed(const Protocol& p, const Limits& limits = {});
Verdict check_interruptible(const Protocol& p, const Limits& limits = {});
Verdict check_accepting(const Protocol& p, const Limits& limits = {});
ConsistencyReport check_consistent(const Protocol& p, const Limits& limits = {});

// Re-executes the witness through step() and reports whether the violation
// it describes actually occurs.
bool replay_witness(const Protocol& p, const Witness& w);

}  // namespace gifkit
