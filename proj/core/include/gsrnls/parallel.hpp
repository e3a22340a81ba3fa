#pragma once

#include <functional>

namespace gsrnls {

/// Resolves a thread-count request: n > 0 is used as-is; n == 0 falls back
/// to the GSR_NLS_THREADS environment variable and then to
/// std::thread::hardware_concurrency() (minimum 1).
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, count) on `threads` worker threads. Indices are
/// handed out via an atomic counter; fn must be safe to call concurrently
/// for distinct indices. threads <= 1 runs inline on the calling thread.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(int count, int threads,
                  const std::function<void(int)>& fn);

} // namespace gsrnls
