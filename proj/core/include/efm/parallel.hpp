#pragma once

#include <cstddef>
#include <functional>

namespace efm {

/// Number of worker threads: explicit request, else the EFM_THREADS
/// environment variable, else 1.
std::size_t resolve_threads(std::size_t requested);

/// Run body(i) for i in [0, count). Work items are independent; results
/// must be written to disjoint slots so the outcome does not depend on the
/// thread count. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

} // namespace efm
