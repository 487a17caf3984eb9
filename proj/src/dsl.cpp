#include "gifkit/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <vector>

namespace gifkit {

ParseError::ParseError(SourceLocation where, const std::string& message)
    : Error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
      where_(where),
      message_(message) {}

namespace {

enum class Tok { Ident, LBrace, RBrace, Comma, Slash, Dash2, LongArrow, Arrow, At, End };

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Slash: return "'/'";
    case Tok::Dash2: return "'--'";
    case Tok::LongArrow: return "'-->'";
    case Tok::Arrow: return "'->'";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  SourceLocation where;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    SourceLocation here{line, col};
    auto u = static_cast<unsigned char>(c);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (std::isalpha(u) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        advance(1);
      }
      tokens.push_back({Tok::Ident, std::string(text.substr(start, i - start)), here});
    } else if (c == '{' || c == '}' || c == ',' || c == '/' || c == '@') {
      Tok kind = c == '{'   ? Tok::LBrace
                 : c == '}' ? Tok::RBrace
                 : c == ',' ? Tok::Comma
                 : c == '/' ? Tok::Slash
                            : Tok::At;
      tokens.push_back({kind, std::string(1, c), here});
      advance(1);
    } else if (text.substr(i, 3) == "-->") {
      tokens.push_back({Tok::LongArrow, "-->", here});
      advance(3);
    } else if (text.substr(i, 2) == "--") {
      tokens.push_back({Tok::Dash2, "--", here});
      advance(2);
    } else if (text.substr(i, 2) == "->") {
      tokens.push_back({Tok::Arrow, "->", here});
      advance(2);
    } else {
      std::string shown = std::isprint(u) ? std::string(1, c) : "\\x" + [&] {
        std::ostringstream os;
        os << std::hex << static_cast<int>(u);
        return os.str();
      }();
      throw ParseError(here, "unexpected character '" + shown + "'");
    }
  }
  tokens.push_back({Tok::End, "", {line, col}});
  return tokens;
}

struct Named {
  Symbol symbol;
  SourceLocation where;
};

struct RoleDraft {
  std::string id;
  SourceLocation where;
  std::optional<std::vector<Named>> inputs, outputs, states;
  std::optional<std::pair<Named, Named>> init;
  std::optional<Acceptance> acceptance;
  std::vector<std::pair<Transition, SourceLocation>> transitions;
  std::vector<std::array<Named, 4>> transition_parts;  // from, input, output, to
  std::vector<Named> acceptance_members;
  std::vector<std::tuple<Transition, Named>> labels;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  ProtocolDocument document() {
    if (peek().kind == Tok::End) {
      throw ParseError(peek().where, "no protocol declared");
    }
    auto kw = expect_keyword("protocol");
    auto name = identifier("protocol name");
    expect(Tok::LBrace);
    std::map<std::string, RoleDraft> roles;
    std::vector<std::pair<Channel, SourceLocation>> channels;
    while (peek().kind != Tok::RBrace) {
      const auto& t = peek();
      if (t.kind == Tok::Ident && t.text == "role") {
        auto draft = role();
        if (roles.count(draft.id)) {
          throw ParseError(draft.where, "role " + draft.id + " is declared twice");
        }
        auto id = draft.id;
        roles.emplace(id, std::move(draft));
      } else if (t.kind == Tok::Ident && t.text == "channel") {
        auto at = next().where;
        auto sender = identifier("sender role");
        expect(Tok::Arrow);
        auto receiver = identifier("receiver role");
        channels.push_back({{sender.symbol.name(), receiver.symbol.name()}, at});
      } else {
        throw ParseError(t.where, "expected 'role', 'channel' or '}', found " + shown(t));
      }
    }
    expect(Tok::RBrace);
    if (peek().kind != Tok::End) {
      throw ParseError(peek().where, "unexpected " + shown(peek()) + " after the protocol");
    }
    if (roles.empty()) throw ParseError(kw, "protocol " + name.symbol.name() + " declares no role");
    return build(name, kw, roles, channels);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const auto& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  static std::string shown(const Token& t) {
    return t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) {
      throw ParseError(peek().where,
                       std::string("expected ") + describe(kind) + ", found " + shown(peek()));
    }
    return next();
  }

  SourceLocation expect_keyword(const char* word) {
    if (peek().kind != Tok::Ident || peek().text != word) {
      throw ParseError(peek().where, std::string("expected '") + word + "', found " + shown(peek()));
    }
    return next().where;
  }

  Named identifier(const char* what) {
    const auto& t = peek();
    if (t.kind != Tok::Ident) {
      throw ParseError(t.where, std::string("expected ") + what + ", found " + shown(t));
    }
    if (t.text == "eps") throw ParseError(t.where, std::string("'eps' cannot be used as ") + what);
    next();
    return {Symbol(t.text), t.where};
  }

  Named character() {
    const auto& t = peek();
    if (t.kind == Tok::Ident && t.text == "eps") {
      next();
      return {Symbol::eps(), t.where};
    }
    return identifier("character or 'eps'");
  }

  std::vector<Named> name_set(const char* what) {
    expect(Tok::LBrace);
    std::vector<Named> members;
    std::set<Symbol> seen;
    while (peek().kind != Tok::RBrace) {
      auto n = identifier(what);
      if (!seen.insert(n.symbol).second) {
        throw ParseError(n.where, "'" + n.symbol.name() + "' is listed twice");
      }
      members.push_back(std::move(n));
      if (peek().kind == Tok::Comma) next();
    }
    next();
    return members;
  }

  static std::set<Symbol> symbols(const std::vector<Named>& names) {
    std::set<Symbol> out;
    for (const auto& n : names) out.insert(n.symbol);
    return out;
  }

  RoleDraft role() {
    next();  // 'role'
    auto id = identifier("role name");
    RoleDraft draft;
    draft.id = id.symbol.name();
    draft.where = id.where;
    expect(Tok::LBrace);
    auto once = [&](auto& slot, const Token& kw) {
      if (slot) throw ParseError(kw.where, "'" + kw.text + "' is given twice in role " + draft.id);
    };
    while (peek().kind != Tok::RBrace) {
      const auto& t = peek();
      if (t.kind != Tok::Ident) {
        throw ParseError(t.where, "expected a role item or '}', found " + shown(t));
      }
      bool is_transition = peek(1).kind == Tok::Dash2;
      if (!is_transition && t.text == "inputs") {
        once(draft.inputs, t);
        next();
        draft.inputs = name_set("input character");
      } else if (!is_transition && t.text == "outputs") {
        once(draft.outputs, t);
        next();
        draft.outputs = name_set("output character");
      } else if (!is_transition && t.text == "states") {
        once(draft.states, t);
        next();
        draft.states = name_set("state");
      } else if (!is_transition && t.text == "init") {
        once(draft.init, t);
        next();
        auto state = identifier("initial state");
        expect(Tok::Slash);
        auto out = character();
        draft.init = std::make_pair(state, out);
      } else if (!is_transition && t.text == "accept") {
        once(draft.acceptance, t);
        next();
        draft.acceptance = acceptance(draft);
      } else if (is_transition) {
        transition(draft);
      } else {
        throw ParseError(t.where, "unknown role item '" + t.text + "'");
      }
    }
    next();
    return draft;
  }

  Acceptance acceptance(RoleDraft& draft) {
    const auto& t = peek();
    if (t.kind == Tok::Ident && t.text == "final") {
      next();
      auto states = name_set("final state");
      draft.acceptance_members.insert(draft.acceptance_members.end(), states.begin(), states.end());
      return FiniteFinal{symbols(states)};
    }
    if (t.kind == Tok::Ident && t.text == "muller") {
      next();
      expect(Tok::LBrace);
      Muller m;
      while (peek().kind != Tok::RBrace) {
        auto where = peek().where;
        auto set = name_set("state");
        draft.acceptance_members.insert(draft.acceptance_members.end(), set.begin(), set.end());
        if (!m.sets.insert(symbols(set)).second) {
          throw ParseError(where, "Muller set is listed twice");
        }
        if (peek().kind == Tok::Comma) next();
      }
      next();
      return m;
    }
    throw ParseError(t.where, "expected 'final' or 'muller', found " + shown(t));
  }

  void transition(RoleDraft& draft) {
    auto from = identifier("source state");
    expect(Tok::Dash2);
    auto in = character();
    expect(Tok::Slash);
    auto out = character();
    expect(Tok::LongArrow);
    auto to = identifier("target state");
    Transition t{in.symbol, out.symbol, from.symbol, to.symbol};
    draft.transition_parts.push_back({from, in, out, to});
    for (const auto& [existing, where] : draft.transitions) {
      if (existing == t) throw ParseError(from.where, "transition is declared twice");
    }
    draft.transitions.push_back({t, from.where});
    if (peek().kind == Tok::At) {
      next();
      expect_keyword("decision");
      auto label = identifier("decision name");
      draft.labels.emplace_back(t, label);
    }
  }

  void check_member(const std::set<Symbol>& set, const Named& n, const std::string& what,
                    const std::string& role) {
    if (n.symbol.is_eps() || set.count(n.symbol)) return;
    throw ParseError(n.where, "'" + n.symbol.name() + "' is not a " + what + " of role " + role);
  }

  ProtocolDocument build(const Named& name, SourceLocation kw, std::map<std::string, RoleDraft>& roles,
                         const std::vector<std::pair<Channel, SourceLocation>>& channels) {
    std::map<RoleId, IOAutomaton> automata;
    DecisionLabels labels;
    std::map<Symbol, SourceLocation> label_names;
    for (auto& [id, draft] : roles) {
      if (!draft.states) throw ParseError(draft.where, "role " + id + " declares no states");
      if (!draft.init) throw ParseError(draft.where, "role " + id + " has no 'init'");
      if (!draft.acceptance) throw ParseError(draft.where, "role " + id + " has no 'accept'");
      auto inputs = symbols(draft.inputs.value_or(std::vector<Named>{}));
      auto outputs = symbols(draft.outputs.value_or(std::vector<Named>{}));
      auto states = symbols(*draft.states);
      if (states.empty()) throw ParseError(draft.where, "role " + id + " has an empty state set");

      auto overlap = [&](const std::optional<std::vector<Named>>& names, const std::set<Symbol>& other,
                         const char* kind) {
        if (!names) return;
        for (const auto& n : *names) {
          if (other.count(n.symbol)) {
            throw ParseError(n.where, "'" + n.symbol.name() + "' is also used as " + kind);
          }
        }
      };
      overlap(draft.inputs, outputs, "an output character");
      overlap(draft.inputs, states, "a state");
      overlap(draft.outputs, states, "a state");

      check_member(states, draft.init->first, "state", id);
      check_member(outputs, draft.init->second, "output character", id);
      for (const auto& parts : draft.transition_parts) {
        check_member(states, parts[0], "state", id);
        check_member(inputs, parts[1], "input character", id);
        check_member(outputs, parts[2], "output character", id);
        check_member(states, parts[3], "state", id);
      }
      for (const auto& n : draft.acceptance_members) check_member(states, n, "state", id);
      std::vector<Transition> delta;
      for (const auto& [t, where] : draft.transitions) delta.push_back(t);
      try {
        automata.emplace(id, IOAutomaton(inputs, outputs, states,
                                         {draft.init->first.symbol, draft.init->second.symbol},
                                         std::move(delta), *draft.acceptance));
      } catch (const ValidationError& e) {
        throw ParseError(draft.where, e.what());
      }
      for (const auto& [t, label] : draft.labels) {
        auto [it, inserted] = label_names.emplace(label.symbol, label.where);
        if (!inserted) {
          throw ParseError(label.where, "decision name '" + label.symbol.name() + "' is used twice");
        }
        labels.emplace(TransitionRef{id, t}, label.symbol);
      }
    }

    std::map<RoleChar, RoleId> routed;
    std::set<Channel> channel_set;
    for (const auto& [ch, where] : channels) {
      for (const auto* end : {&ch.sender, &ch.receiver}) {
        if (!automata.count(*end)) throw ParseError(where, "channel names unknown role " + *end);
      }
      if (ch.sender == ch.receiver) throw ParseError(where, "channel connects role " + ch.sender + " to itself");
      if (!channel_set.insert(ch).second) throw ParseError(where, "channel is declared twice");
      bool carries = false;
      for (const auto& c : automata.at(ch.sender).outputs()) {
        if (!automata.at(ch.receiver).inputs().count(c)) continue;
        carries = true;
        auto [it, inserted] = routed.emplace(RoleChar{ch.sender, c}, ch.receiver);
        if (!inserted) {
          throw ParseError(where, "character " + ch.sender + "." + c.name() +
                                      " would be routed to both " + it->second + " and " +
                                      ch.receiver);
        }
      }
      if (!carries) {
        throw ParseError(where, "channel " + ch.sender + " -> " + ch.receiver + " carries no character");
      }
    }

    try {
      Protocol p(name.symbol.name(), std::move(automata), std::move(channel_set));
      for (const auto& [label, where] : label_names) {
        for (const auto& [id, a] : p.roles()) {
          if (a.inputs().count(label) || a.outputs().count(label) || a.states().count(label)) {
            throw ParseError(where, "decision name '" + label.name() +
                                        "' collides with a character or state of role " + id);
          }
        }
      }
      return {std::move(p), std::move(labels)};
    } catch (const ValidationError& e) {
      throw ParseError(kw, e.what());
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ProtocolDocument parse_protocol(std::string_view text) { return Parser(text).document(); }

}  // namespace gifkit

namespace gifkit {

namespace {

std::string joined(const std::set<Symbol>& names) {
  if (names.empty()) return "{}";
  std::string out = "{ ";
  bool first = true;
  for (const auto& n : names) {
    if (!first) out += ", ";
    out += n.name();
    first = false;
  }
  return out + " }";
}

}  // namespace

std::string serialize(const Protocol& p, const DecisionLabels& labels) {
  std::ostringstream os;
  os << "protocol " << p.name() << " {\n";
  for (const auto& [id, a] : p.roles()) {
    os << "  role " << id << " {\n";
    os << "    inputs " << joined(a.inputs()) << "\n";
    os << "    outputs " << joined(a.outputs()) << "\n";
    os << "    states " << joined(a.states()) << "\n";
    os << "    init " << a.initial().state << " / " << a.initial().output << "\n";
    if (const auto* fin = std::get_if<FiniteFinal>(&a.acceptance())) {
      os << "    accept final " << joined(fin->states) << "\n";
    } else {
      const auto& sets = std::get<Muller>(a.acceptance()).sets;
      os << "    accept muller {";
      bool first = true;
      for (const auto& set : sets) {
        os << (first ? " " : ", ") << joined(set);
        first = false;
      }
      os << (sets.empty() ? "}" : " }") << "\n";
    }
    auto delta = a.delta();
    std::sort(delta.begin(), delta.end(), [](const Transition& x, const Transition& y) {
      return std::tie(x.from, x.input, x.output, x.to) < std::tie(y.from, y.input, y.output, y.to);
    });
    for (const auto& t : delta) {
      os << "    " << t.from << " -- " << t.input << " / " << t.output << " --> " << t.to;
      if (auto it = labels.find(TransitionRef{id, t}); it != labels.end()) {
        os << " @decision " << it->second;
      }
      os << "\n";
    }
    os << "  }\n";
  }
  for (const auto& ch : p.channels()) {
    os << "  channel " << ch.sender << " -> " << ch.receiver << "\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gifkit
