#include "mstsim/common.hpp"

#include <atomic>

namespace mstsim {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }

}  // namespace mstsim
