#include "ncflow/parallel.hpp"

#include <atomic>

namespace ncflow {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned count)
{
  g_threads = count;
}

unsigned thread_count()
{
  const unsigned t = g_threads.load();
  if (t > 0)
    return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace ncflow
