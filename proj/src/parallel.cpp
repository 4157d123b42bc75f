#include "oplab/parallel.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oplab {

int resolve_jobs(int jobs) {
    if (jobs < 0) jobs = 1;
#ifdef _OPENMP
    if (jobs == 0) return omp_get_max_threads();
    return jobs;
#else
    return jobs == 0 ? 1 : jobs;
#endif
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const int workers = resolve_jobs(jobs);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(oplab_parallel_error)
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

} // namespace oplab
