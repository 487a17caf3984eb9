#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gifkit/automaton.hpp"

namespace gifkit {

using RoleId = std::string;

// A character of the product: eps, or a character qualified by the role
// whose alphabet it belongs to. Outputs are qualified by the sender,
// delivered inputs by the receiver.
struct RoleChar {
  RoleId role;
  Symbol ch;

  static RoleChar eps() { return {}; }
  bool is_eps() const { return ch.is_eps(); }
  std::string str() const { return is_eps() ? std::string("eps") : role + "." + ch.name(); }
  auto operator<=>(const RoleChar&) const = default;
};

// Parses "eps" or "Role.char".
RoleChar parse_role_char(std::string_view text);

// A Shannon state from `sender` to `receiver`. It carries every output
// character of the sender that is also an input character of the receiver.
struct Channel {
  RoleId sender;
  RoleId receiver;
  auto operator<=>(const Channel&) const = default;
};

class Protocol {
 public:
  // Throws ValidationError on unknown channel endpoints, self channels,
  // channels that carry nothing, characters routed to two receivers, more
  // than one nonempty initial output, or mixed acceptance kinds.
  Protocol(std::string name, std::map<RoleId, IOAutomaton> roles, std::set<Channel> channels);

  const std::string& name() const { return name_; }
  const std::set<Channel>& channels() const { return channels_; }

  // Roles are ordered by id; configurations use the same order.
  std::size_t role_count() const { return roles_.size(); }
  const RoleId& role_id(std::size_t index) const { return roles_[index].first; }
  const IOAutomaton& role(std::size_t index) const { return roles_[index].second; }
  const IOAutomaton& role(const RoleId& id) const { return role(role_index(id)); }
  std::size_t role_index(const RoleId& id) const;
  bool has_role(const RoleId& id) const;
  const std::vector<std::pair<RoleId, IOAutomaton>>& roles() const { return roles_; }

  // The delivered input for a sender's output, if a channel carries it.
  std::optional<RoleChar> route(const RoleChar& output) const;

  bool uses_muller() const;

  bool operator==(const Protocol& other) const;

 private:
  std::string name_;
  std::vector<std::pair<RoleId, IOAutomaton>> roles_;
  std::set<Channel> channels_;
  std::map<RoleChar, RoleId> routes_;
};

// Applies the same renaming to every role.
Protocol rename_protocol(const Protocol& p, const Renaming& mapping);

// True iff every output character is carried by a channel and every input
// character is fed by one: no external inputs or outputs remain.
bool check_closed(const Protocol& p);

// The protocol state: one state value per role plus the content of the
// Shannon states. At most one character is ever in flight.
struct Configuration {
  std::vector<Symbol> states;
  RoleChar pending;
  auto operator<=>(const Configuration&) const = default;
};

Configuration initial_configuration(const Protocol& p);

// "C.away,Z.wait|Z.arrived"; the "|..." part is omitted when nothing is
// pending.
std::string to_string(const Protocol& p, const Configuration& cfg);
Configuration parse_configuration(const Protocol& p, std::string_view text);

struct Limits {
  std::size_t max_configurations = 100000;
  std::size_t max_runs = 2000000;
  std::size_t max_muller_subproblems = 100000;
};

// One admissible transition at a configuration.
struct Choice {
  std::size_t role = 0;   // index of the moving role
  std::size_t local = 0;  // index into that role's delta()
  RoleChar input;
  RoleChar output;
  Configuration next;
};

// What the execution rule admits at a configuration. With a routed pending
// character the input is forced and `choices` lists the transitions that
// consume it (empty means the character cannot be processed). Otherwise
// `choices` lists every enabled spontaneous transition of every role.
struct Enabled {
  bool forced = false;
  RoleChar forced_input;
  std::vector<Choice> choices;

  bool undeliverable() const { return forced && choices.empty(); }
  bool terminal() const { return !forced && choices.empty(); }
};

Enabled enabled_choices(const Protocol& p, const Configuration& cfg);

// One time step of a run: the input consumed at this time (eps if none), the
// output present at this time, the configuration and the decision taken.
struct RunStep {
  std::size_t time = 0;
  RoleChar input;
  RoleChar output;
  Configuration cfg;
  Symbol decision;
  auto operator<=>(const RunStep&) const = default;
};

enum class StepKind { Advanced, Terminated, ExecutionError };

struct StepOutcome {
  StepKind kind = StepKind::Terminated;
  Configuration next;                 // Advanced only
  RunStep emitted;                    // completed step at the current time
  std::optional<std::size_t> choice;  // index into enabled_choices() used
  RoleChar undeliverable;             // ExecutionError only
};

// Executes one round of the protocol's execution rule from `cfg`. A pending
// routed character is always delivered first and the selector is then only
// asked to pick among the consuming transitions. `choice` may be omitted when
// at most one alternative exists; otherwise it is required.
StepOutcome step(const Protocol& p, const Configuration& cfg,
                 std::optional<std::size_t> choice = std::nullopt, std::size_t time = 0);

enum class ConfigStatus { Live, Terminal, Error };

struct ProductTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  RoleChar input;
  RoleChar output;
  std::size_t role = 0;
  std::size_t local = 0;
  std::size_t choice = 0;  // index into enabled_choices(from)
};

// The reachable part of the coupled product automaton.
class ProductAutomaton {
 public:
  const Protocol& protocol() const { return *protocol_; }
  const std::shared_ptr<const Protocol>& shared_protocol() const { return protocol_; }

  std::size_t size() const { return configs_.size(); }
  std::size_t initial() const { return 0; }
  const Configuration& configuration(std::size_t index) const { return configs_[index]; }
  const std::vector<Configuration>& configurations() const { return configs_; }
  std::optional<std::size_t> find(const Configuration& cfg) const;
  // Throws PreconditionError for configurations that are not reachable.
  std::size_t index_of(const Configuration& cfg) const;
  std::string name(std::size_t index) const { return to_string(*protocol_, configs_[index]); }

  const std::vector<ProductTransition>& transitions() const { return transitions_; }
  std::span<const std::size_t> outgoing(std::size_t index) const { return outgoing_[index]; }
  ConfigStatus status(std::size_t index) const { return status_[index]; }
  bool forced(std::size_t index) const { return !configs_[index].pending.is_eps(); }

  bool muller() const { return protocol_->uses_muller(); }
  // Every role's state is final (finite acceptance only).
  bool is_final(std::size_t index) const;
  // Lifted Muller condition: every role's projection of `set` is one of the
  // role's Muller sets.
  bool accepts_infinity_set(const std::set<std::size_t>& set) const;
  // The configuration is an element of the lifted acceptance component: a
  // final configuration, or one whose role states each occur in some Muller
  // set of that role.
  bool in_acceptance_component(std::size_t index) const;

 private:
  friend ProductAutomaton build_product(const Protocol& p, const Limits& limits);

  std::shared_ptr<const Protocol> protocol_;
  std::vector<Configuration> configs_;
  std::map<Configuration, std::size_t> index_;
  std::vector<ProductTransition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<ConfigStatus> status_;
};

// Requires a closed protocol (PreconditionError otherwise). Throws
// ResourceError when more than limits.max_configurations are reachable.
ProductAutomaton build_product(const Protocol& p, const Limits& limits = {});

enum class RunEnd { Terminated, ExecutionError, DepthCutoff, Repeated };

struct Run {
  std::vector<RunStep> steps;
  std::vector<std::size_t> choices;  // selector used at each step
  RunEnd end = RunEnd::Terminated;
};

enum class RunEnumeration {
  All,           // every run up to the depth bound
  StopAtRepeat,  // additionally stop a run right after it revisits a configuration
};

// Visits every run from the initial configuration, resolving each choice in
// every possible way, up to `max_depth` transitions. Runs are visited in
// lexicographic order of their choice vectors. Throws ResourceError after
// limits.max_runs runs.
void for_each_run(const Protocol& p, std::size_t max_depth, RunEnumeration mode,
                  const std::function<void(const Run&)>& visit, const Limits& limits = {});

std::vector<Run> enumerate_runs(const Protocol& p, std::size_t max_depth,
                                RunEnumeration mode = RunEnumeration::All,
                                const Limits& limits = {});

// Re-executes `choices` from the initial configuration through step().
Run replay_choices(const Protocol& p, std::span<const std::size_t> choices);

// A segment that starts with a spontaneous transition and lasts until the
// first transition without output. Infinite chains end at the transition
// that closes a cycle of in-flight configurations.
struct InteractionChain {
  std::vector<std::size_t> transitions;  // indices into ProductAutomaton::transitions()
  bool infinite = false;
};

std::vector<InteractionChain> interaction_chains(const ProductAutomaton& product,
                                                 const Limits& limits = {});
std::vector<InteractionChain> interaction_chains(const Protocol& p, const Limits& limits = {});

}  // namespace gifkit
