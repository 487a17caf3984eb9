#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gifkit/dsl.hpp"

namespace gifkit::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(GIFKIT_FIXTURES) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(GIFKIT_GOLDEN) + "/" + name;
}

inline ProtocolDocument load_fixture(const std::string& name) {
  return parse_protocol(read_file(fixture_path(name)));
}

inline Protocol protocol_from(std::string_view text) { return parse_protocol(text).protocol; }

inline ProtocolDocument railway() { return load_fixture("railway.gif"); }
inline ProtocolDocument echo() { return load_fixture("echo.gif"); }

}  // namespace gifkit::testing
