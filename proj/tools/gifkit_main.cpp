// gifkit: command-line front end for protocol checking, decision derivation
// and meaning queries.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gifkit/consistency.hpp"
#include "gifkit/dsl.hpp"
#include "gifkit/errors.hpp"
#include "gifkit/export.hpp"
#include "gifkit/gdf.hpp"

using namespace gifkit;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInputError = 2 };

struct Options {
  std::string file;
  std::string format = "text";
  std::size_t max_states = Limits{}.max_configurations;

  // simulate / fulfill
  std::string decisions;
  std::string cycle;
  std::string from;
  bool interactive = false;
  std::string record;
  std::string replay;

  // meaning
  std::string decision;
  std::string character;
  std::string at;
  std::string equivalent;
  std::vector<std::string> compose;
};

// Thrown for bad flag values found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(' ');
    auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

Limits limits_of(const Options& o) {
  Limits l;
  l.max_configurations = o.max_states;
  std::cerr << "configuration cap: " << o.max_states << "\n";
  return l;
}

ProtocolDocument load(const Options& o) { return parse_protocol(read_file(o.file)); }

Gif load_gif(const Options& o) {
  auto doc = load(o);
  return derive_decisions(doc.protocol, doc.labels, limits_of(o));
}

std::vector<Symbol> decision_list(const Gif& g, const std::string& text) {
  std::vector<Symbol> out;
  for (const auto& name : split_list(text)) {
    Symbol d(name);
    if (!g.has_decision(d)) throw UsageError("unknown decision '" + name + "'");
    out.push_back(d);
  }
  return out;
}

std::string closure_text(const Gif& g, const std::set<std::size_t>& members) {
  std::string out = "{";
  for (auto m : members) out += (out.size() > 1 ? "; " : " ") + g.product().name(m);
  return out + " }";
}

void print_verdict(const Protocol& p, const char* what, const Verdict& v) {
  std::cout << "  " << what << ": " << (v.holds ? "yes" : "no") << "\n";
  if (!v.witness) return;
  const auto& w = *v.witness;
  std::cout << "    witness (" << to_string(w.kind) << "): " << w.description << "\n";
  auto choices = [](const std::vector<std::size_t>& cs) {
    std::string s;
    for (auto c : cs) s += (s.empty() ? "" : ",") + std::to_string(c);
    return s.empty() ? std::string("-") : s;
  };
  std::cout << "    prefix choices: " << choices(w.prefix) << "\n";
  if (!w.cycle.empty()) std::cout << "    cycle choices: " << choices(w.cycle) << "\n";
  for (const auto& c : w.configurations) std::cout << "    at " << to_string(p, c) << "\n";
}

int cmd_check(const Options& o) {
  auto doc = load(o);
  auto report = check_consistent(doc.protocol, limits_of(o));
  if (o.format == "json") {
    std::cout << to_json(doc.protocol, report).dump(2) << "\n";
  } else {
    std::cout << "protocol " << doc.protocol.name() << ": "
              << (report.consistent ? "consistent" : "inconsistent") << "\n";
    print_verdict(doc.protocol, "well-formed", report.well_formed);
    print_verdict(doc.protocol, "interruptible", report.interruptible);
    print_verdict(doc.protocol, "accepting", report.accepting);
  }
  return report.consistent ? kOk : kNegative;
}

void print_steps(const Gif& g, const Run& run, std::size_t& time, std::ostream& os,
                 bool include_last = true) {
  auto n = run.steps.size() - (include_last || run.steps.empty() ? 0 : 1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = run.steps[k];
    os << "t=" << time++ << "  " << to_string(g.protocol(), s.cfg) << "  in=" << s.input.str()
       << "  out=" << s.output.str() << "  decision=" << s.decision.str() << "\n";
  }
}

int interactive(const Gif& g, const Options& o) {
  std::ifstream replay_in;
  if (!o.replay.empty()) {
    replay_in.open(o.replay);
    if (!replay_in) throw UsageError("cannot read " + o.replay);
  }
  std::istream& in = o.replay.empty() ? std::cin : replay_in;
  std::ofstream record;
  if (!o.record.empty()) {
    record.open(o.record);
    if (!record) throw UsageError("cannot write " + o.record);
  }

  std::size_t time = 0;
  auto settled = run_gif(g, {}, g.product().initial());
  print_steps(g, settled.prefix, time, std::cout, false);
  auto cfg = g.product().index_of(settled.prefix.steps.back().cfg);
  std::size_t position = 0;
  while (true) {
    const auto& c = g.product().configuration(cfg);
    std::cout << "at " << g.product().name(cfg) << "  pending=" << c.pending.str() << "\n";
    auto enabled = g.enabled_decisions(cfg);
    if (enabled.empty()) {
      std::cout << "terminated\n";
      return kOk;
    }
    for (std::size_t k = 0; k < enabled.size(); ++k) {
      std::set<std::size_t> target;
      for (auto t : g.uses(enabled[k])) {
        if (g.product().transitions()[t].from == cfg) {
          target = epsilon_closure(g, g.product().transitions()[t].to).members;
        }
      }
      std::cout << "  [" << k + 1 << "] " << enabled[k] << " -> " << closure_text(g, target)
                << "\n";
    }
    std::cout << "decision? " << std::flush;
    std::string line;
    if (!std::getline(in, line)) {
      std::cout << "\nend of input\n";
      return kOk;
    }
    auto first = line.find_first_not_of(" \t\r");
    line = first == std::string::npos ? "" : line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::cout << line << "\n";
    if (record.is_open()) record << line << "\n" << std::flush;
    if (line == "quit" || line == "q") return kOk;
    Symbol picked;
    if (!line.empty() && line.find_first_not_of("0123456789") == std::string::npos) {
      auto k = std::stoul(line);
      if (k >= 1 && k <= enabled.size()) picked = enabled[k - 1];
    } else if (std::find(enabled.begin(), enabled.end(), Symbol(line)) != enabled.end()) {
      picked = Symbol(line);
    }
    if (picked.is_eps()) {
      std::cout << "'" << line << "' is not enabled at step " << position + 1 << "\n";
      continue;
    }
    ++position;
    auto run = run_gif(g, {{picked}, {}}, cfg);
    print_steps(g, run.prefix, time, std::cout, false);
    cfg = g.product().index_of(run.prefix.steps.back().cfg);
  }
}

int cmd_simulate(const Options& o) {
  auto g = load_gif(o);
  if (o.interactive) return interactive(g, o);
  DecisionSequence seq{decision_list(g, o.decisions), decision_list(g, o.cycle)};
  std::optional<std::size_t> start;
  if (!o.from.empty()) start = g.product().index_of(parse_configuration(g.protocol(), o.from));
  GifRun run;
  try {
    run = run_gif(g, seq, start);
  } catch (const NotEnabledError& e) {
    std::cerr << "error: " << e.what() << " (step " << e.position() << ")\n";
    return kNegative;
  }
  if (o.format == "json") {
    std::cout << to_json(g, run).dump(2) << "\n";
    return kOk;
  }
  std::size_t time = 0;
  print_steps(g, run.prefix, time, std::cout, !run.cycle);
  if (run.cycle) {
    std::cout << "cycle:\n";
    print_steps(g, *run.cycle, time, std::cout);
    bool accepted = g.product().muller() && g.product().accepts_infinity_set(run.infinity_set);
    std::cout << "infinity set: " << closure_text(g, run.infinity_set) << "\n";
    std::cout << "lasso " << (accepted ? "accepted" : "not accepted") << "\n";
  }
  return kOk;
}

int cmd_derive(const Options& o) {
  auto g = load_gif(o);
  if (o.format == "json") {
    std::cout << to_json(g).dump(2) << "\n";
  } else if (o.format == "dot") {
    std::cout << export_dot(g);
  } else {
    std::cout << "decisions:\n";
    for (const auto& [name, d] : g.decisions()) {
      std::cout << "  " << name << "  " << to_string(d.kind) << "  owner " << d.owner << "\n";
    }
    std::cout << "transitions:\n";
    for (const auto& i : all_interpretations(g)) {
      std::cout << "  " << g.product().name(i.source) << " -- " << i.input.str() << ","
                << i.decision.str() << " / " << i.output.str() << " --> "
                << g.product().name(i.target) << "\n";
    }
  }
  return kOk;
}

int cmd_gdf(const Options& o) {
  auto g = load_gif(o);
  auto gdf = build_gdf(g);
  if (o.format == "json") {
    std::cout << to_json(g, gdf).dump(2) << "\n";
  } else if (o.format == "dot") {
    std::cout << export_dot(g, gdf);
  } else {
    for (std::size_t s = 0; s < gdf.states.size(); ++s) {
      std::cout << "s" << s << (s == gdf.initial ? " (initial)" : "")
                << (gdf.states[s].accepting ? " (accepting)" : "") << " "
                << closure_text(g, gdf.states[s].members) << "\n";
    }
    for (const auto& [key, to] : gdf.delta) {
      std::cout << "s" << key.first << " --" << key.second << "--> s" << to << "\n";
    }
    for (const auto& v : gdf.partition_violations) {
      std::cout << "partition violation: closures of " << g.product().name(v.seed_a) << " and "
                << g.product().name(v.seed_b) << " overlap\n";
    }
  }
  return kOk;
}

Interpretation parse_interpretation(const Gif& g, const std::string& text) {
  auto a = text.find(':');
  auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw UsageError("--compose expects CONFIGURATION:INPUT:DECISION, got '" + text + "'");
  }
  auto cfg = g.product().index_of(parse_configuration(g.protocol(), text.substr(0, a)));
  auto input = parse_role_char(text.substr(a + 1, b - a - 1));
  auto d = text.substr(b + 1);
  return interpret(g, cfg, input, d == "eps" || d.empty() ? Symbol() : Symbol(d));
}

int cmd_meaning(const Options& o) {
  auto g = load_gif(o);
  auto gdf = build_gdf(g);
  if (!o.decision.empty()) {
    auto m = abstract_meaning_of_decision(g, Symbol(o.decision));
    std::cout << "decision " << o.decision << "\n";
    for (const auto& target : m.targets()) {
      std::cout << "  -> s" << gdf.state_of(*target.begin()) << " " << closure_text(g, target)
                << "\n";
    }
    return kOk;
  }
  if (!o.character.empty()) {
    if (o.at.empty()) throw UsageError("--char needs --at");
    auto input = parse_role_char(o.character);
    auto cfg = g.product().index_of(parse_configuration(g.protocol(), o.at));
    auto selections = enforced_selections(g, input, cfg);
    std::cout << "character " << input.str() << " at " << g.product().name(cfg) << "\n";
    if (selections.empty()) std::cout << "  unique continuation\n";
    for (const auto& d : selections) {
      for (auto t : g.uses(d)) {
        if (g.product().transitions()[t].from != cfg) continue;
        std::cout << "  " << d << " -> "
                  << closure_text(g, epsilon_closure(g, g.product().transitions()[t].to).members)
                  << "\n";
      }
    }
    return kOk;
  }
  if (!o.equivalent.empty()) {
    auto ds = decision_list(g, o.equivalent);
    if (ds.size() != 2) throw UsageError("--equivalent expects two decisions");
    bool same = decisions_equivalent(g, ds[0], ds[1]);
    std::cout << ds[0] << " and " << ds[1] << (same ? " are equivalent\n" : " are not equivalent\n");
    return same ? kOk : kNegative;
  }
  if (!o.compose.empty()) {
    if (o.compose.size() != 2) throw UsageError("--compose must be given twice");
    auto m1 = parse_interpretation(g, o.compose[0]);
    auto m2 = parse_interpretation(g, o.compose[1]);
    auto composed = compose_meaning(g, m1, m2);
    if (!composed) {
      std::cout << "non-compositional: the second step does not start at "
                << g.product().name(m1.target) << "\n";
      return kNegative;
    }
    std::cout << "composed: output " << composed->output.str() << ", configuration "
              << g.product().name(composed->config) << "\n";
    return kOk;
  }
  throw UsageError("meaning needs --decision, --char, --equivalent or --compose");
}

int cmd_fulfill(const Options& o) {
  auto g = load_gif(o);
  DecisionSequence seq{decision_list(g, o.decisions), decision_list(g, o.cycle)};
  std::size_t start = g.product().initial();
  if (!o.from.empty()) start = g.product().index_of(parse_configuration(g.protocol(), o.from));
  bool ok = fulfills(g, start, seq);
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? kOk : kNegative;
}

int cmd_fmt(const Options& o) {
  auto doc = load(o);
  std::cout << serialize(doc.protocol, doc.labels);
  return kOk;
}

int cmd_dot(const Options& o) {
  std::cout << export_dot(load(o).protocol);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check interacting I/O automata, derive decisions and query meanings."};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd, std::vector<std::string> formats) {
    cmd->add_option("file", o.file, "protocol document")->required();
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
    cmd->add_option("--max-states", o.max_states, "configuration cap")
        ->envname("GIFKIT_MAX_STATES")
        ->check(CLI::PositiveNumber);
  };

  std::map<std::string, int (*)(const Options&)> handlers;
  auto check = app.add_subcommand("check", "check consistency");
  add_common(check, {"text", "json"});
  handlers["check"] = cmd_check;

  auto simulate = app.add_subcommand("simulate", "run a decision sequence");
  add_common(simulate, {"text", "json"});
  simulate->add_option("--decisions", o.decisions, "comma separated decisions");
  simulate->add_option("--cycle", o.cycle, "decisions repeated forever");
  simulate->add_option("--from", o.from, "start configuration");
  simulate->add_flag("--interactive", o.interactive, "pick decisions step by step");
  simulate->add_option("--record", o.record, "write the picked decisions to a file");
  simulate->add_option("--replay", o.replay, "read the decisions from a recorded file");
  handlers["simulate"] = cmd_simulate;

  auto derive = app.add_subcommand("derive", "derive decisions (the GIF)");
  add_common(derive, {"text", "json", "dot"});
  handlers["derive"] = cmd_derive;

  auto gdf = app.add_subcommand("gdf", "reduced decision automaton");
  add_common(gdf, {"text", "json", "dot"});
  handlers["gdf"] = cmd_gdf;

  auto meaning = app.add_subcommand("meaning", "meaning queries");
  add_common(meaning, {"text"});
  meaning->add_option("--decision", o.decision, "abstract meaning of a decision");
  meaning->add_option("--char", o.character, "character, e.g. C.arrived");
  meaning->add_option("--at", o.at, "configuration where --char is delivered");
  meaning->add_option("--equivalent", o.equivalent, "two decisions, comma separated");
  meaning->add_option("--compose", o.compose, "CONFIGURATION:INPUT:DECISION, twice");
  handlers["meaning"] = cmd_meaning;

  auto fulfill = app.add_subcommand("fulfill", "does a decision sequence fulfil the GIF");
  add_common(fulfill, {"text"});
  fulfill->add_option("--seq", o.decisions, "comma separated decisions");
  fulfill->add_option("--cycle", o.cycle, "decisions repeated forever");
  fulfill->add_option("--from", o.from, "start configuration");
  handlers["fulfill"] = cmd_fulfill;

  auto fmt = app.add_subcommand("fmt", "print the canonical form");
  add_common(fmt, {"text"});
  handlers["fmt"] = cmd_fmt;

  auto dot = app.add_subcommand("dot", "draw the roles");
  add_common(dot, {"dot"});
  handlers["dot"] = cmd_dot;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    auto* cmd = app.get_subcommands().front();
    return handlers.at(cmd->get_name())(o);
  } catch (const IllPosedQuery& e) {
    std::cerr << "ill-posed: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
