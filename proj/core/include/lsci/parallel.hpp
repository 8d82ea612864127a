#pragma once

#include <cstddef>
#include <functional>

namespace lsci {

/// Number of worker threads to use when the caller passes 0.
std::size_t default_thread_count() noexcept;

/// Runs body(i) for i in [0, n) on up to `threads` workers. Iterations are
/// handed out dynamically; the first exception thrown is rethrown after all
/// workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace lsci
