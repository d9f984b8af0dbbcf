#include "sigmacalc/parallel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sigmacalc;

TEST(ParallelSum, MatchesSerialBitForBit)
{
    auto term = [](std::int64_t k) { return std::log1p(0.37 / static_cast<double>(k)) * (k % 3 - 1); };
    for (std::int64_t n : {0, 1, 63, 64, 65, 1000, 100000, 1 << 20})
        EXPECT_EQ(parallel_sum(1, n + 1, term), serial_sum(1, n + 1, term)) << n;
}

TEST(ParallelSum, IndependentOfThreadCount)
{
#ifdef _OPENMP
    auto term = [](std::int64_t k) { return 1.0 / (static_cast<double>(k) * k); };
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = parallel_sum(1, 1 << 18, term);
    omp_set_num_threads(4);
    const double four = parallel_sum(1, 1 << 18, term);
    omp_set_num_threads(saved);
    EXPECT_EQ(one, four);
#else
    GTEST_SKIP() << "built without OpenMP";
#endif
}

TEST(ParallelSum, CompensatedAccuracy)
{
    // 1 + n tiny terms that plain summation drops
    const std::int64_t n = 1 << 20;
    auto term = [](std::int64_t k) { return k == 0 ? 1.0 : 1e-17; };
    EXPECT_NEAR(parallel_sum(0, n + 1, term), 1.0 + n * 1e-17, 1e-16);
}

TEST(ParallelSum, LongDouble)
{
    auto term = [](std::int64_t k) { return 1.0L / static_cast<long double>(k); };
    const long double h = parallel_sum<long double>(1, 1001, term);
    EXPECT_NEAR(static_cast<double>(h), 7.485470860550344912656518, 1e-15);
}

TEST(ParallelSum, RethrowsTermFailure)
{
    auto term = [](std::int64_t k) -> double {
        if (k == 50000)
            throw std::runtime_error("bad term");
        return 1.0;
    };
    EXPECT_THROW(parallel_sum(0, 100000, term), std::runtime_error);
}

TEST(ParallelMap, PreservesOrder)
{
    std::vector<int> in(1000);
    for (int i = 0; i < 1000; ++i)
        in[i] = i;
    const auto out = parallel_map<long>(in, [](int v) { return static_cast<long>(v) * v; });
    for (int i = 0; i < 1000; ++i)
        EXPECT_EQ(out[i], static_cast<long>(i) * i);
    const auto serial = parallel_map<long>(in, [](int v) { return static_cast<long>(v) * v; }, Exec::serial);
    EXPECT_EQ(out, serial);
}

TEST(ParallelMap, RethrowsFirstFailure)
{
    std::vector<int> in{1, 2, 3, 4};
    auto fn = [](int v) -> int {
        if (v >= 3)
            throw std::invalid_argument(std::to_string(v));
        return v;
    };
    try {
        parallel_map<int>(in, fn);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "3");
    }
}
