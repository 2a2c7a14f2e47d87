#include "rockrelax/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rockrelax {

std::size_t worker_count() {
  if (const char* env = std::getenv("ROCKRELAX_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // Fall through to the hardware default on malformed values.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace rockrelax
