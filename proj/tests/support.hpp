#pragma once

#include <sstream>
#include <string>

#include "kbsc/io.hpp"

namespace kbsc::test {

inline ModelFile fixture(const std::string& name) {
  return load_model(std::string(KBSC_FIXTURE_DIR) + "/" + name + ".des");
}

/// "a gamma" -> event ids; "" is the empty string.
inline EventString str(const PlantSpec& m, const std::string& text) {
  EventString out;
  std::istringstream in(text);
  std::string name;
  while (in >> name) out.push_back(m.find_event(name).value());
  return out;
}

inline EventId ev(const PlantSpec& m, const std::string& name) { return m.find_event(name).value(); }
inline StateId st(const PlantSpec& m, const std::string& name) { return m.find_state(name).value(); }

/// World reached by a string in G'.
inline std::size_t world(const KripkeFrame& f, const std::string& text) {
  return f.composite().run(str(f.model(), text)).value();
}

inline std::string names(const PlantSpec& m, const Estimate& e) { return format_estimate(m, e); }

}  // namespace kbsc::test
