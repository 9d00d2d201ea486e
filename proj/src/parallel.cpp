#include "nfg/parallel.hpp"

#include <atomic>

namespace nfg {

namespace {
std::atomic<unsigned> g_limit{0};
}

void set_thread_limit(unsigned limit) { g_limit.store(limit); }

unsigned thread_limit() {
  const unsigned limit = g_limit.load();
  if (limit != 0) return limit;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace nfg
