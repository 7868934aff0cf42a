#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace genuslab {

/// Worker count: GENUSLAB_THREADS when set to a positive integer, else the hardware concurrency.
unsigned thread_budget();

/// Runs body(0..n-1) on up to thread_budget() threads. Each index is visited once;
/// the exception from the lowest failing index is rethrown after all workers join.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace genuslab
