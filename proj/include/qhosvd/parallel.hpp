#pragma once

#include <cstddef>
#include <functional>

namespace qhosvd {

// Process-wide cap on worker threads used by the kernels. 1 (the default)
// means everything runs on the calling thread. Results never depend on it:
// every parallel loop partitions independent outputs, never a reduction.
void set_thread_count(unsigned n);
[[nodiscard]] unsigned thread_count();

// Runs body(i) for i in [begin, end), split into contiguous chunks.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

// Runs a and b, concurrently when more than one thread is allowed.
void run_pair(const std::function<void()>& a, const std::function<void()>& b);

}  // namespace qhosvd
