#pragma once

#include <compare>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

namespace gifkit {

// Characters, state values and decisions all share this name type. The
// default-constructed symbol is the empty character eps, which compares
// unequal to every named symbol.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string name);

  static Symbol eps() { return Symbol(); }

  bool is_eps() const { return name_.empty(); }
  const std::string& name() const { return name_; }

  // "eps" for the empty character, the name otherwise.
  std::string str() const { return is_eps() ? std::string("eps") : name_; }

  auto operator<=>(const Symbol&) const = default;

 private:
  std::string name_;
};

using Alphabet = std::set<Symbol>;

std::ostream& operator<<(std::ostream& os, const Symbol& s);

// ASCII identifier: [A-Za-z_][A-Za-z0-9_]*, and not the reserved word "eps".
bool is_identifier(std::string_view text);

namespace literals {
inline Symbol operator""_s(const char* text, std::size_t n) {
  return Symbol(std::string(text, n));
}
}  // namespace literals

}  // namespace gifkit
