#pragma once

#include <functional>

namespace cwrm {

// Worker count for a pool: `requested` > 0 wins, else the CWRM_THREADS
// environment variable, else hardware concurrency; always in [1, n_tasks].
int resolve_thread_count(int requested, int n_tasks);

// Runs body(0..n_tasks-1) on a pool of n_threads workers pulling tasks from
// a shared counter. Results must be written to task-indexed slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// task is rethrown after all workers stop.
void parallel_for(int n_tasks, int n_threads,
                  const std::function<void(int)>& body);

}  // namespace cwrm
