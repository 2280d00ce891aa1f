#pragma once

#include <exception>
#include <mutex>

#include "zm/common.hpp"

namespace zm {

// Runs body(i) for i in [0, n). Under Exec::parallel the iterations are spread
// over OpenMP threads; each writes only its own slot, so callers that reduce
// afterwards in index order get the serial result bit for bit. The first
// exception thrown by any iteration is rethrown on the calling thread.
template <class Body>
void for_each_index(long n, Exec exec, Body&& body) {
    std::exception_ptr failure;
    std::mutex mu;
    if (exec == Exec::serial) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        {
            std::lock_guard lock(mu);
            if (failure) continue;
        }
        try {
            body(i);
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace zm
