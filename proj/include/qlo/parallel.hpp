#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace qlo {

// Deterministic fan-out: the domain is split into chunks whose boundaries do
// not depend on the worker count, chunk results are stored by index and the
// caller reduces them in order. That makes outputs byte-identical at any
// --workers value, including for floating-point accumulations.
template <class ChunkResult, class ChunkFn>
std::vector<ChunkResult> run_chunks(std::int64_t num_chunks, int workers, ChunkFn fn) {
  std::vector<ChunkResult> results(static_cast<std::size_t>(num_chunks));
  if (workers <= 1 || num_chunks <= 1) {
    for (std::int64_t c = 0; c < num_chunks; ++c) results[c] = fn(c);
    return results;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= num_chunks) return;
      results[c] = fn(c);
    }
  };
  int nthreads = workers;
  if (static_cast<std::int64_t>(nthreads) > num_chunks)
    nthreads = static_cast<int>(num_chunks);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace qlo
