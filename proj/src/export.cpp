#include "gifkit/export.hpp"

#include <sstream>

namespace gifkit {

namespace {

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string transition_label(const RoleChar& input, const Symbol& decision, const RoleChar& output) {
  return input.str() + "," + decision.str() + " / " + output.str();
}

nlohmann::json verdict_json(const Protocol& p, const Verdict& v) {
  nlohmann::json j;
  j["holds"] = v.holds;
  if (!v.witness) {
    j["witness"] = nullptr;
    return j;
  }
  const auto& w = *v.witness;
  nlohmann::json wj;
  wj["kind"] = to_string(w.kind);
  wj["description"] = w.description;
  wj["prefix"] = w.prefix;
  wj["cycle"] = w.cycle;
  wj["character"] = w.character.is_eps() ? nlohmann::json(nullptr) : nlohmann::json(w.character.str());
  auto& cfgs = wj["configurations"] = nlohmann::json::array();
  for (const auto& c : w.configurations) cfgs.push_back(to_string(p, c));
  j["witness"] = std::move(wj);
  return j;
}

nlohmann::json run_json(const Gif& g, const Run& run) {
  auto steps = nlohmann::json::array();
  for (const auto& s : run.steps) {
    steps.push_back({{"time", s.time},
                     {"input", s.input.str()},
                     {"output", s.output.str()},
                     {"configuration", to_string(g.protocol(), s.cfg)},
                     {"decision", s.decision.str()}});
  }
  return steps;
}

}  // namespace

std::string export_dot(const Protocol& p) {
  std::ostringstream os;
  os << "digraph " << quoted(p.name()) << " {\n  compound=true;\n";
  for (const auto& [id, a] : p.roles()) {
    os << "  subgraph " << quoted("cluster_" + id) << " {\n    label=" << quoted(id) << ";\n";
    for (const auto& s : a.states()) {
      os << "    " << quoted(id + "." + s.name()) << " [label=" << quoted(s.name());
      if (s == a.initial().state) os << ", penwidth=2";
      os << "];\n";
    }
    for (const auto& t : a.delta()) {
      os << "    " << quoted(id + "." + t.from.name()) << " -> " << quoted(id + "." + t.to.name())
         << " [label=" << quoted(t.input.str() + " / " + t.output.str()) << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& ch : p.channels()) {
    const auto& from = p.role(ch.sender);
    const auto& to = p.role(ch.receiver);
    std::string carried;
    for (const auto& c : from.outputs()) {
      if (!to.inputs().count(c)) continue;
      if (!carried.empty()) carried += ",";
      carried += c.name();
    }
    os << "  " << quoted(ch.sender + "." + from.initial().state.name()) << " -> "
       << quoted(ch.receiver + "." + to.initial().state.name()) << " [style=dashed, ltail="
       << quoted("cluster_" + ch.sender) << ", lhead=" << quoted("cluster_" + ch.receiver)
       << ", label=" << quoted(carried) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_dot(const Gif& g) {
  const auto& product = g.product();
  std::ostringstream os;
  os << "digraph " << quoted(g.protocol().name() + "_gif") << " {\n";
  for (std::size_t i = 0; i < product.size(); ++i) {
    os << "  c" << i << " [label=" << quoted(product.name(i)) << ", shape=box";
    if (i == product.initial()) os << ", penwidth=2";
    os << "];\n";
  }
  for (std::size_t t = 0; t < product.transitions().size(); ++t) {
    const auto& tr = product.transitions()[t];
    os << "  c" << tr.from << " -> c" << tr.to << " [label="
       << quoted(transition_label(tr.input, g.decision_of(t), tr.output)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_dot(const Gif& g, const Gdf& gdf) {
  std::ostringstream os;
  os << "digraph " << quoted(g.protocol().name() + "_gdf") << " {\n";
  for (std::size_t s = 0; s < gdf.states.size(); ++s) {
    std::string label;
    for (auto m : gdf.states[s].members) {
      if (!label.empty()) label += "\n";
      label += g.product().name(m);
    }
    os << "  s" << s << " [label=" << quoted(label) << ", shape=box";
    if (gdf.states[s].accepting) os << ", peripheries=2";
    if (s == gdf.initial) os << ", penwidth=2";
    os << "];\n";
  }
  for (const auto& [key, to] : gdf.delta) {
    os << "  s" << key.first << " -> s" << to << " [label=" << quoted(key.second.name()) << "];\n";
  }
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const Protocol& p, const ConsistencyReport& report) {
  nlohmann::json j;
  j["schema"] = "ConsistencyReport";
  j["version"] = kJsonSchemaVersion;
  j["protocol"] = p.name();
  j["wellFormed"] = verdict_json(p, report.well_formed);
  j["interruptible"] = verdict_json(p, report.interruptible);
  j["accepting"] = verdict_json(p, report.accepting);
  j["consistent"] = report.consistent;
  return j;
}

nlohmann::json to_json(const Gif& g) {
  nlohmann::json j;
  j["schema"] = "Gif";
  j["version"] = kJsonSchemaVersion;
  j["protocol"] = g.protocol().name();
  auto& decisions = j["decisions"] = nlohmann::json::array();
  for (const auto& [name, d] : g.decisions()) {
    decisions.push_back({{"name", name.name()}, {"kind", to_string(d.kind)}, {"owner", d.owner}});
  }
  auto& configs = j["configurations"] = nlohmann::json::array();
  for (std::size_t i = 0; i < g.product().size(); ++i) configs.push_back(g.product().name(i));
  auto& delta = j["deltaPrime"] = nlohmann::json::array();
  for (const auto& [key, image] : g.delta_prime()) {
    delta.push_back({{"input", key.input.str()},
                     {"decision", key.decision.str()},
                     {"from", key.config},
                     {"output", image.output.str()},
                     {"to", image.config}});
  }
  j["initial"] = g.product().initial();
  return j;
}

nlohmann::json to_json(const Gif& g, const Gdf& gdf) {
  nlohmann::json j;
  j["schema"] = "Gdf";
  j["version"] = kJsonSchemaVersion;
  j["protocol"] = g.protocol().name();
  auto& states = j["states"] = nlohmann::json::array();
  for (std::size_t s = 0; s < gdf.states.size(); ++s) {
    nlohmann::json members = nlohmann::json::array();
    for (auto m : gdf.states[s].members) members.push_back(g.product().name(m));
    nlohmann::json seeds = nlohmann::json::array();
    for (auto m : gdf.states[s].seeds) seeds.push_back(g.product().name(m));
    states.push_back({{"id", s},
                      {"members", std::move(members)},
                      {"seeds", std::move(seeds)},
                      {"accepting", gdf.states[s].accepting}});
  }
  auto& inputs = j["inputs"] = nlohmann::json::array();
  for (const auto& d : gdf.inputs) inputs.push_back(d.name());
  auto& delta = j["delta"] = nlohmann::json::array();
  for (const auto& [key, to] : gdf.delta) {
    delta.push_back({{"from", key.first}, {"decision", key.second.name()}, {"to", to}});
  }
  j["initial"] = gdf.initial;
  auto& violations = j["partitionViolations"] = nlohmann::json::array();
  for (const auto& v : gdf.partition_violations) {
    violations.push_back({g.product().name(v.seed_a), g.product().name(v.seed_b)});
  }
  return j;
}

nlohmann::json to_json(const Gif& g, const GifRun& run) {
  nlohmann::json j;
  j["schema"] = "Run";
  j["version"] = kJsonSchemaVersion;
  j["prefix"] = run_json(g, run.prefix);
  if (run.cycle) {
    j["cycle"] = run_json(g, *run.cycle);
    auto& inf = j["infinitySet"] = nlohmann::json::array();
    for (auto i : run.infinity_set) inf.push_back(g.product().name(i));
  } else {
    j["cycle"] = nullptr;
  }
  return j;
}

}  // namespace gifkit
