#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hamdual/parallel.hpp"
#include "hamdual/random.hpp"
#include "hamdual/report.hpp"

TEST(Report, TracksWorstAndViolations) {
    hamdual::ViolationReport r(1e-9);
    r.record(0.5, 0, {1.0});
    r.record(-1e-10, 1, {2.0}, "a");
    r.record(-1e-6, 2, {3.0}, "b");
    r.record(-1e-6, 3, {4.0}, "c");
    EXPECT_EQ(r.n_checked, 4u);
    EXPECT_EQ(r.n_violations, 2u);
    EXPECT_EQ(r.worst_gap, -1e-6);
    EXPECT_EQ(r.worst_index, 2u);
    EXPECT_EQ(r.worst_check, "b");
    EXPECT_FALSE(r.clean());
}

TEST(Report, NanIsAViolation) {
    hamdual::ViolationReport r(1.0);
    r.record(-0.5, 0, {});
    r.record(std::nan(""), 5, {}, "nan");
    EXPECT_EQ(r.n_violations, 1u);
    EXPECT_EQ(r.worst_check, "nan");
}

TEST(Report, MergeIsOrderIndependent) {
    hamdual::ViolationReport a(0.0), b(0.0), ab(0.0), ba(0.0);
    a.record(-2.0, 7, {7.0});
    a.record(1.0, 8, {8.0});
    b.record(-2.0, 3, {3.0});
    ab.merge(a);
    ab.merge(b);
    ba.merge(b);
    ba.merge(a);
    EXPECT_EQ(ab.worst_index, 3u);
    EXPECT_EQ(ba.worst_index, 3u);
    EXPECT_EQ(ab.n_checked, 3u);
    EXPECT_EQ(ab.n_violations, ba.n_violations);
}

TEST(Random, UniformRangeAndMoments) {
    hamdual::Rng rng(123);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5e-3);
    sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 1e-2);
    EXPECT_NEAR(sum2 / n, 1.0, 2e-2);
}

TEST(Random, TenThousandthOutputIsFixed) {
    // std::mt19937_64 default-seeded 10000th output is fixed by [rand.predef].
    hamdual::Rng rng(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = rng.next();
    EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Random, CaseSeedsDiffer) {
    EXPECT_NE(hamdual::case_seed(0, 1, 0), hamdual::case_seed(0, 1, 1));
    EXPECT_NE(hamdual::case_seed(0, 1, 0), hamdual::case_seed(0, 2, 0));
    EXPECT_NE(hamdual::case_seed(0, 1, 0), hamdual::case_seed(1, 1, 0));
    EXPECT_EQ(hamdual::case_seed(4, 5, 6), hamdual::case_seed(4, 5, 6));
}

TEST(Parallel, ChunksCoverRangeInOrder) {
    for (unsigned w : {1u, 2u, 3u, 8u}) {
        const auto parts = hamdual::parallel_chunks<std::vector<std::size_t>>(
            17, w, [](std::size_t b, std::size_t e, unsigned) {
                std::vector<std::size_t> v(e - b);
                std::iota(v.begin(), v.end(), b);
                return v;
            });
        std::vector<std::size_t> all;
        for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
        std::vector<std::size_t> expect(17);
        std::iota(expect.begin(), expect.end(), 0);
        EXPECT_EQ(all, expect) << w;
    }
}

TEST(Parallel, EmptyRangeAndExceptions) {
    const auto parts =
        hamdual::parallel_chunks<int>(0, 4, [](std::size_t b, std::size_t e, unsigned) { return int(e - b); });
    EXPECT_EQ(parts.size(), 1u);
    EXPECT_THROW(hamdual::parallel_chunks<int>(10, 2,
                                               [](std::size_t b, std::size_t, unsigned) -> int {
                                                   if (b > 0) throw std::runtime_error("boom");
                                                   return 0;
                                               }),
                 std::runtime_error);
}
