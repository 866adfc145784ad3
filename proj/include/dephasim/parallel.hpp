#pragma once

#include <cstddef>
#include <functional>

namespace dephasim {

/// Worker cap: DEPHASIM_THREADS when set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Fixed chunk width used by every Monte Carlo reduction. Chunk boundaries
/// never depend on the worker count, so per-chunk partial results can be
/// merged in chunk order and reruns are bit-identical under any parallelism.
inline constexpr std::size_t kMcChunk = 1024;

/// Calls fn(chunk_index, begin, end) for every chunk of [0, n). Chunks are
/// claimed dynamically by worker threads; fn must only write state owned by
/// its chunk_index. Rethrows the first exception raised by any worker.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
}

}  // namespace dephasim
