#pragma once

#include <cstddef>
#include <functional>

namespace lvc {

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` workers. Chunk boundaries depend only on count and threads.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Worker cap from LVC_THREADS, falling back to hardware concurrency.
/// Throws InvalidConfig if the variable is set but not a positive integer.
unsigned threads_from_env();

}  // namespace lvc
