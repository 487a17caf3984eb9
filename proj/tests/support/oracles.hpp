#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>

#include "gifkit/gdf.hpp"
#include "gifkit/protocol.hpp"

namespace gifkit::testing {

// Verdicts observed on explicitly enumerated runs, without the graph
// algorithms of the consistency module.
struct ObservedVerdicts {
  bool well_formed = true;     // no run ends in an execution error
  bool interruptible = true;   // no run repeats a configuration inside one chain
  std::size_t runs = 0;
};

ObservedVerdicts observe_runs(const Protocol& p, std::size_t depth, const Limits& limits = {});

// Configuration pairs linked by step() for some selector value, explored
// from the initial configuration by repeated stepping.
std::set<std::pair<Configuration, Configuration>> stepped_pairs(const Protocol& p);

// Whether every realizable behaviour is accepted under Muller acceptance,
// by enumerating every subset of every strongly connected component. No
// answer when a component has more than `max_component` configurations.
std::optional<bool> brute_force_muller_accepting(const ProductAutomaton& product,
                                                 std::size_t max_component = 14);

// Number of (GDF state, decision) pairs with more than one target state,
// counted directly from the product transitions of the members.
std::size_t gdf_nondeterminism(const Gif& g, const Gdf& gdf);

}  // namespace gifkit::testing
