#include "exec.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lfd {

namespace {
std::atomic<Reduction> g_mode{Reduction::deterministic};
std::once_flag g_threads_once;
} // namespace

void set_reduction(Reduction r) { g_mode.store(r); }
Reduction reduction() { return g_mode.load(); }

void init_threads()
{
    std::call_once(g_threads_once, [] {
#ifdef _OPENMP
        if (const char* s = std::getenv("LFD_THREADS")) {
            const int n = std::atoi(s);
            if (n > 0) omp_set_num_threads(n);
        }
#endif
    });
}

void set_threads(int n)
{
    init_threads();
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int thread_count()
{
    init_threads();
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

} // namespace lfd
