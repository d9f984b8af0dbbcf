#pragma once

// Deterministic reductions and maps.
//
// parallel_sum splits [begin, end) into a fixed number of chunks that does not
// depend on the thread count, sums every chunk with compensated summation and
// combines the partials in chunk order, so the result is bit-identical for any
// OMP_NUM_THREADS. serial_sum runs the same partition on one thread and is the
// reference the tests compare against.

#include "sigmacalc/summation.hpp"

#include <cstdint>
#include <exception>
#include <vector>

namespace sigmacalc {

inline constexpr std::int64_t kReductionChunks = 64;
inline constexpr std::int64_t kParallelThreshold = 1 << 14;

enum class Exec { serial, parallel };

namespace detail {

inline std::int64_t chunk_begin(std::int64_t begin, std::int64_t n, std::int64_t c)
{
    return begin + (n * c) / kReductionChunks;
}

template <typename T, typename Term>
T chunked_sum(std::int64_t begin, std::int64_t end, Term& term, bool use_threads)
{
    if (end <= begin)
        return T{};
    const std::int64_t n = end - begin;
    std::vector<T> partial(kReductionChunks, T{});
    std::vector<std::exception_ptr> failure(kReductionChunks);

#pragma omp parallel for schedule(static) if (use_threads && n >= kParallelThreshold)
    for (std::int64_t c = 0; c < kReductionChunks; ++c) {
        try {
            NeumaierSum<T> acc;
            const std::int64_t hi = chunk_begin(begin, n, c + 1);
            for (std::int64_t i = chunk_begin(begin, n, c); i < hi; ++i)
                acc += static_cast<T>(term(i));
            partial[c] = acc.value();
        } catch (...) {
            failure[c] = std::current_exception();
        }
    }
    for (auto& f : failure)
        if (f)
            std::rethrow_exception(f);

    NeumaierSum<T> total;
    for (T v : partial)
        total += v;
    return total.value();
}

} // namespace detail

// Sum of term(i) for i in [begin, end).
template <typename T = double, typename Term>
T serial_sum(std::int64_t begin, std::int64_t end, Term&& term)
{
    return detail::chunked_sum<T>(begin, end, term, false);
}

template <typename T = double, typename Term>
T parallel_sum(std::int64_t begin, std::int64_t end, Term&& term)
{
    return detail::chunked_sum<T>(begin, end, term, true);
}

template <typename T = double, typename Term>
T lattice_sum(std::int64_t begin, std::int64_t end, Term&& term, Exec exec)
{
    return exec == Exec::parallel ? parallel_sum<T>(begin, end, term)
                                  : serial_sum<T>(begin, end, term);
}

// out[i] = fn(in[i]); order preserved, first exception (by index) rethrown.
template <typename Out, typename In, typename Fn>
std::vector<Out> parallel_map(const std::vector<In>& in, Fn&& fn, Exec exec = Exec::parallel)
{
    const std::int64_t n = static_cast<std::int64_t>(in.size());
    std::vector<Out> out(in.size());
    std::vector<std::exception_ptr> failure(in.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && n > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[i] = fn(in[i]);
        } catch (...) {
            failure[i] = std::current_exception();
        }
    }
    for (auto& f : failure)
        if (f)
            std::rethrow_exception(f);
    return out;
}

} // namespace sigmacalc
