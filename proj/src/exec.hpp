#pragma once

#include <cstddef>
#include <vector>

namespace lfd {

// fast: thread-local partial sums (order depends on scheduling).
// deterministic: per-item partials combined by a fixed pairwise tree.
enum class Reduction { fast, deterministic };

void set_reduction(Reduction r);
Reduction reduction();

// Applies LFD_THREADS from the environment once; safe to call repeatedly.
void init_threads();
int thread_count();
// n > 0 overrides LFD_THREADS and the OpenMP default.
void set_threads(int n);

double pairwise_sum(const double* x, std::size_t n);

// Sum of term(i) for i in [0, n), honoring the current reduction mode.
template <class Term>
double reduce_sum(std::size_t n, Term term)
{
    init_threads();
    if (reduction() == Reduction::deterministic) {
        std::vector<double> part(n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            part[i] = term(static_cast<std::size_t>(i));
        return pairwise_sum(part.data(), n);
    }
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        acc += term(static_cast<std::size_t>(i));
    return acc;
}

template <class Term>
double reduce_max(std::size_t n, Term term)
{
    init_threads();
    double best = -1.0 / 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double t = term(static_cast<std::size_t>(i));
        if (t > best) best = t;
    }
    return best;
}

template <class Body>
void parallel_for(std::size_t n, Body body)
{
    init_threads();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        body(static_cast<std::size_t>(i));
}

// Compensated accumulator for long inner sums.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x)
    {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace lfd
