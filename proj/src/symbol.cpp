#include "gifkit/symbol.hpp"

#include <cctype>

#include "gifkit/errors.hpp"

namespace gifkit {

Symbol::Symbol(std::string name) : name_(std::move(name)) {
  if (name_.empty()) {
    throw ValidationError("a named symbol needs a nonempty name; use Symbol::eps()");
  }
}

std::ostream& operator<<(std::ostream& os, const Symbol& s) { return os << s.str(); }

bool is_identifier(std::string_view text) {
  if (text.empty() || text == "eps") return false;
  auto first = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

}  // namespace gifkit
