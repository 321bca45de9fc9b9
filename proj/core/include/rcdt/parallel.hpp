#ifndef RCDT_PARALLEL_HPP
#define RCDT_PARALLEL_HPP

#include <functional>

namespace rcdt {

/// Runs fn(i) for i in [0, n) on up to `jobs` worker threads. Callers write
/// results into index-addressed slots, so the outcome does not depend on
/// scheduling. jobs <= 1 runs inline. Exceptions are captured and rethrown.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

/// Worker count resolution: explicit value if > 0, else the RCDT_JOBS
/// environment variable, else 1.
int resolve_jobs(int requested);

} // namespace rcdt

#endif // RCDT_PARALLEL_HPP
