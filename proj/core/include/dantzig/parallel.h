#pragma once

#include <cstddef>
#include <functional>

namespace dantzig {

// Number of workers to use for `requested` (0 means hardware concurrency).
unsigned ResolveThreadCount(unsigned requested);

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items must
// write to disjoint outputs. If any item throws, the exception from the lowest
// failing index is rethrown after all workers join.
void ParallelFor(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& body);

// Deterministic 64-bit seed for sub-stream `index` of `master`.
unsigned long long DeriveSeed(unsigned long long master,
                              unsigned long long index);

}  // namespace dantzig
