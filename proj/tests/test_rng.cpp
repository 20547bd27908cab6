#include "clique/rng.hpp"

#include <algorithm>
#include <gtest/gtest.h>
#include <numeric>
#include <set>
#include <vector>

using namespace clique;

TEST(Rng, DeterministicGivenSeed) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiverge) {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    EXPECT_EQ(same, 0);
}

TEST(Rng, UniformStaysInRange) {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform(-1.0, 1.0);
        EXPECT_GE(u, -1.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Rng, UniformMeanNearCenter) {
    Rng rng(11);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.uniform(-1.0, 1.0);
    EXPECT_NEAR(sum / n, 0.0, 0.02);
}

TEST(Rng, BelowIsBoundedAndCoversSupport) {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t v = rng.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, ShuffleIsAPermutation) {
    Rng rng(5);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Rng, SampleWithoutReplacementIsDistinct) {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const auto s = rng.sample_without_replacement(10, 4);
        std::set<std::size_t> unique(s.begin(), s.end());
        EXPECT_EQ(unique.size(), 4u);
        for (const auto x : s) EXPECT_LT(x, 10u);
    }
}

TEST(Rng, DerivedStreamsAreIndependentOfEachOther) {
    // Substreams with different keys must not collide on their first draws.
    std::set<std::uint64_t> firsts;
    for (std::uint64_t key = 0; key < 1000; ++key)
        firsts.insert(Rng(derive_seed(123, key)).next_u64());
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}
