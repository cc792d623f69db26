#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace riccati {

// Worker count: RICCATI_LAB_THREADS if set (clamped to >= 1), otherwise
// hardware concurrency.
unsigned worker_count();

// Runs fn(begin, end) over a partition of [0, n) into chunks of the given
// size, distributed over worker_count() threads (serial when 1).  The chunk
// boundaries are fixed by (n, chunk) alone, never by the worker count, so
// any per-chunk output indexed by chunk is deterministic.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Fixed-order pairwise (cascade) summation; deterministic and O(log n) error
// growth.  Used for all Monte Carlo reductions.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace riccati
