#pragma once

#include <cstddef>
#include <functional>

namespace phaselock {

/// Hardware thread count (>= 1).
int default_thread_count();

/// Runs fn(chunk_index, begin, end) for every chunk of [0, n) split into
/// fixed-size chunks. Chunk boundaries depend only on (n, chunk_size), never
/// on the thread count, so callers that combine per-chunk partials in chunk
/// order get results that are reproducible for any --threads value.
void parallel_chunks(std::size_t n, std::size_t chunk_size, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Number of chunks parallel_chunks will produce.
std::size_t chunk_count(std::size_t n, std::size_t chunk_size);

}  // namespace phaselock
