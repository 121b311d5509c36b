#include "kyleq/parallel.hpp"

#include <atomic>

namespace kyleq {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_cap(int workers) { g_workers.store(workers < 0 ? 0 : workers); }

int worker_cap() { return g_workers.load(); }

}  // namespace kyleq
