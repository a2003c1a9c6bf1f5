#pragma once

#include <cstddef>
#include <functional>

namespace newtondrag {

/// Worker count: NEWTONDRAG_THREADS if set and positive, else hardware concurrency.
std::size_t default_thread_count();

/// Runs task(i) for i in [0, count) on up to `threads` workers, further capped
/// by NEWTONDRAG_THREADS when it is set. Tasks must write only to their own
/// result slot; callers reduce in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task,
                  std::size_t threads = default_thread_count());

}  // namespace newtondrag
