#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "gifkit/errors.hpp"
#include "gifkit/gif.hpp"
#include "gifkit/protocol.hpp"

namespace gifkit {

struct SourceLocation {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
};

// Syntax and semantic errors of protocol documents. what() reads
// "line:column: message".
class ParseError : public Error {
 public:
  ParseError(SourceLocation where, const std::string& message);
  SourceLocation location() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  SourceLocation where_;
  std::string message_;
};

struct ProtocolDocument {
  Protocol protocol;
  DecisionLabels labels;
};

// Grammar (whitespace-insensitive, '#' starts a line comment, commas in
// braces are optional):
//
//   document   := 'protocol' ID '{' (role | channel)* '}'
//   role       := 'role' ID '{' item* '}'
//   item       := 'inputs' set | 'outputs' set | 'states' set
//               | 'init' ID '/' char | 'accept' acceptance | transition
//   set        := '{' (ID ','?)* '}'
//   acceptance := 'final' set | 'muller' '{' (set ','?)* '}'
//   transition := ID '--' char '/' char '-->' ID ('@' 'decision' ID)?
//   channel    := 'channel' ID '->' ID
//   char       := 'eps' | ID
ProtocolDocument parse_protocol(std::string_view text);

// Canonical text: roles, alphabets, sets and transitions in lexicographic
// order. parse_protocol(serialize(p, l)) reproduces p and l.
std::string serialize(const Protocol& p, const DecisionLabels& labels = {});

}  // namespace gifkit
