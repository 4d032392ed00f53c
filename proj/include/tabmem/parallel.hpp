#pragma once

#include <cstddef>
#include <functional>

namespace tabmem {

/// Worker cap used by every parallel loop in the library. Defaults to
/// TABMEM_THREADS when set, otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend on the worker count, so bodies must write only to slots they own.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tabmem
