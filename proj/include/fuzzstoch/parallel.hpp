#ifndef FUZZSTOCH_PARALLEL_HPP
#define FUZZSTOCH_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fuzzstoch {

/// Number of worker threads to use: `requested` if > 0, else the
/// FUZZSTOCH_THREADS environment variable, else hardware concurrency.
int resolve_threads(int requested);

// Static block partition of [0, n). Each index is processed exactly once
// and workers write disjoint output slots, so results are identical for
// any thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_PARALLEL_HPP
