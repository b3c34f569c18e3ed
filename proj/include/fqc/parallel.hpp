#pragma once

#include <functional>

namespace fqc {

/// Worker count used by parallel_for (default 1; set from --threads).
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [begin, end) on up to thread_count() threads.
/// Iterations must write to disjoint outputs. Exceptions are rethrown in the caller.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace fqc
