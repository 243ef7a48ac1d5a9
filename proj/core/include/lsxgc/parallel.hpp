#pragma once

#include <cstddef>
#include <functional>

namespace lsxgc {

/// Resolves a thread-count request: 0 means "auto" (hardware concurrency).
unsigned resolve_threads(unsigned requested);

/// Runs body(0..count-1) on up to `threads` worker threads. Work items must
/// write to disjoint, preallocated slots; with that discipline the result is
/// independent of scheduling, which is what the determinism contract relies
/// on. The first exception thrown by any item is rethrown on the caller.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace lsxgc
