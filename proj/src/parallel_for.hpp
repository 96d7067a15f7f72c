#pragma once

#include <exception>
#include <vector>

namespace melnlab::detail {

// Runs fn(i) for i in [0, m); the first exception by index is rethrown after the loop.
template <class Fn>
void parallel_for(long m, bool parallel, Fn&& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(m > 0 ? m : 0));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < m; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace melnlab::detail
