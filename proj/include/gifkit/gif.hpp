#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gifkit/consistency.hpp"
#include "gifkit/protocol.hpp"

namespace gifkit {

enum class DecisionKind { Spontaneous, Selection };

const char* to_string(DecisionKind kind);

struct Decision {
  Symbol name;
  DecisionKind kind = DecisionKind::Spontaneous;
  RoleId owner;
  auto operator<=>(const Decision&) const = default;
};

// Names one transition of one role.
struct TransitionRef {
  RoleId role;
  Transition transition;
  auto operator<=>(const TransitionRef&) const = default;
};

// User-chosen decision names, keyed by the role transition they determine.
using DecisionLabels = std::map<TransitionRef, Symbol>;

// Applies a character renaming to the transitions a label map refers to.
DecisionLabels rename_labels(const DecisionLabels& labels, const Renaming& mapping);

struct GifKey {
  RoleChar input;
  Symbol decision;  // eps when the continuation is unique
  std::size_t config = 0;
  auto operator<=>(const GifKey&) const = default;
};

struct GifImage {
  RoleChar output;
  std::size_t config = 0;
  std::size_t transition = 0;  // index into ProductAutomaton::transitions()
  auto operator<=>(const GifImage&) const = default;
};

// A consistent protocol whose product transition relation is made a
// function by an additional decision input.
class Gif {
 public:
  const ProductAutomaton& product() const { return product_; }
  const Protocol& protocol() const { return product_.protocol(); }

  const std::map<Symbol, Decision>& decisions() const { return decisions_; }
  bool has_decision(const Symbol& d) const { return decisions_.count(d) != 0; }

  // The decision-extended transition function.
  const std::map<GifKey, GifImage>& delta_prime() const { return delta_; }

  // Decision carried by a product transition (eps if none).
  const Symbol& decision_of(std::size_t transition) const { return decision_of_[transition]; }
  // Product transitions that carry `d`, in index order.
  const std::vector<std::size_t>& uses(const Symbol& d) const;

  // True iff leaving `cfg` consumes a decision.
  bool awaits_decision(std::size_t cfg) const;
  std::vector<Symbol> enabled_decisions(std::size_t cfg) const;

 private:
  friend Gif derive_decisions(const Protocol& p, const DecisionLabels& labels,
                              const Limits& limits);
  explicit Gif(ProductAutomaton product) : product_(std::move(product)) {}

  ProductAutomaton product_;
  std::map<Symbol, Decision> decisions_;
  std::map<GifKey, GifImage> delta_;
  std::vector<Symbol> decision_of_;
  std::map<Symbol, std::vector<std::size_t>> uses_;
};

// Every spontaneous transition and every alternative of a forced input with
// several consuming transitions gets a decision; unique forced continuations
// get eps. Unlabelled decisions are named D_<role>_<from>_<n>. Throws
// PreconditionError if the protocol is not consistent and NamingError for
// bad labels.
Gif derive_decisions(const Protocol& p, const DecisionLabels& labels = {},
                     const Limits& limits = {});

// The concrete meaning of `input` at `source` under `decision`.
struct Interpretation {
  std::size_t source = 0;
  RoleChar input;
  Symbol decision;
  RoleChar output;
  std::size_t target = 0;
  auto operator<=>(const Interpretation&) const = default;
};

// Throws NoSuchTransitionError if the triple is outside the domain.
Interpretation interpret(const Gif& g, std::size_t cfg, const RoleChar& input,
                         const Symbol& decision);

// Every entry of the transition function, in key order.
std::vector<Interpretation> all_interpretations(const Gif& g);

// A finite decision sequence, or a lasso when `cycle` is nonempty.
struct DecisionSequence {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;
  bool lasso() const { return !cycle.empty(); }
};

// For a lasso, `prefix` holds the steps before the periodic part, `cycle` one
// period, and `infinity_set` the configurations visited in it.
struct GifRun {
  Run prefix;
  std::optional<Run> cycle;
  std::set<std::size_t> infinity_set;
};

// Replays the sequence deterministically from `start` (the initial
// configuration by default). Forced steps without choice are taken as soon
// as they are possible. Throws NotEnabledError with the 1-based position of
// the first decision that cannot be taken.
GifRun run_gif(const Gif& g, const DecisionSequence& seq,
               std::optional<std::size_t> start = std::nullopt);

// Whether the run induced by `seq` from `start` is accepted. A sequence that
// cannot be replayed does not fulfil the GIF. Finite sequences under Muller
// acceptance and lassos under finite acceptance are IllPosedQuery.
bool fulfills(const Gif& g, std::size_t start, const DecisionSequence& seq);

}  // namespace gifkit
