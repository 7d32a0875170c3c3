#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#include <omp.h>

namespace polybloch {

// Every kernel has a serial reference path; both produce identical output.
enum class Execution { serial, parallel };

inline void set_worker_count(int workers) {
    if (workers > 0) omp_set_num_threads(workers);
}

inline int worker_count() { return omp_get_max_threads(); }

// Runs body(i) for i in [0, count). Each index must write only its own slots.
// If several indices throw, the exception of the lowest index is rethrown,
// so failures do not depend on scheduling.
template <class Body>
void for_each_index(Execution exec, std::size_t count, Body&& body) {
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    std::mutex guard;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace polybloch
