#include "distval/parallel.hpp"

#include <cstdlib>
#include <string>

namespace distval {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
  if (unsigned t = g_threads.load()) return t;
  if (const char* env = std::getenv("DISTVAL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(unsigned n) { g_threads.store(n); }

}  // namespace distval
