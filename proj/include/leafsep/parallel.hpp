#pragma once

#include <functional>

namespace leafsep {

/// Worker count: LEAFSEP_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
int workerCount();

/// Runs fn(i) for i in [0, n) across workers. fn must be safe to call
/// concurrently for distinct i (write-to-own-slot style); results are
/// identical for any worker count.
void parallelFor(int n, const std::function<void(int)>& fn);

}  // namespace leafsep
