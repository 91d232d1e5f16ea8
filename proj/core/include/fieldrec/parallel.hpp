#pragma once

#include <cstddef>
#include <functional>

namespace fieldrec {

/// Worker count from FIELDREC_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Indices are claimed dynamically; callers write results into slot i so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace fieldrec
