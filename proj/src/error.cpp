#include "catlim/error.hpp"

#include <cstdlib>
#include <string>

namespace catlim {

Caps Caps::from_environment() {
  Caps caps;
  if (const char* raw = std::getenv("CATLIM_MAX_BUDGET")) {
    try {
      std::size_t pos = 0;
      const unsigned long long value = std::stoull(raw, &pos);
      if (pos == std::string(raw).size() && value > 0) {
        caps.search_budget = static_cast<std::size_t>(value);
      }
    } catch (const std::exception&) {
      // ignored: a malformed override leaves the default in place
    }
  }
  return caps;
}

const Caps& default_caps() {
  static const Caps caps = Caps::from_environment();
  return caps;
}

}  // namespace catlim
