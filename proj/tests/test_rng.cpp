#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "spectail/rng.hpp"

using namespace spectail;

// Random123 known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
    struct Kat {
        Philox4x32::Counter ctr;
        Philox4x32::Key key;
        Philox4x32::Counter out;
    };
    const Kat kats[] = {
        {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
        {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
         {0xffffffffu, 0xffffffffu},
         {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
        {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
         {0xa4093822u, 0x299f31d0u},
         {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
    };
    for (const auto& k : kats) EXPECT_EQ(Philox4x32::generate(k.ctr, k.key), k.out);
}

TEST(Philox, MatchesHandWrittenRounds) {
    RandomStream s(99, StreamTag::generic);
    for (int i = 0; i < 200; ++i) {
        Philox4x32::Counter c = {s.next_u32(), s.next_u32(), s.next_u32(), s.next_u32()};
        Philox4x32::Key k = {s.next_u32(), s.next_u32()};
        uint32_t c2[4] = {c[0], c[1], c[2], c[3]};
        uint32_t k2[2] = {k[0], k[1]};
        oracle::philox(c2, k2);
        const auto out = Philox4x32::generate(c, k);
        for (int j = 0; j < 4; ++j) EXPECT_EQ(out[j], c2[j]);
    }
}

TEST(RandomStream, ReproducibleAndTagged) {
    RandomStream a(7, StreamTag::matrix_entry, 1, 2, 3), b(7, StreamTag::matrix_entry, 1, 2, 3);
    RandomStream c(7, StreamTag::net_build, 1, 2, 3), d(7, StreamTag::matrix_entry, 1, 2, 4);
    bool differ_tag = false, differ_id = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differ_tag |= x != c.next_u64();
        differ_id |= x != d.next_u64();
    }
    EXPECT_TRUE(differ_tag);
    EXPECT_TRUE(differ_id);
}

TEST(RandomStream, MomentsOfDerivedDraws) {
    RandomStream s(2024, StreamTag::generic);
    const int N = 200000;
    double su = 0, sn = 0, sn2 = 0, se = 0, ss = 0;
    for (int i = 0; i < N; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double g = s.normal();
        sn += g;
        sn2 += g * g;
        se += s.exponential();
        ss += s.sign();
    }
    // 5 standard errors
    EXPECT_NEAR(su / N, 0.5, 5 * std::sqrt(1.0 / 12 / N));
    EXPECT_NEAR(sn / N, 0.0, 5 / std::sqrt(N));
    EXPECT_NEAR(sn2 / N, 1.0, 5 * std::sqrt(2.0 / N));
    EXPECT_NEAR(se / N, 1.0, 5 / std::sqrt(N));
    EXPECT_NEAR(ss / N, 0.0, 5 / std::sqrt(N));
}

TEST(Splitmix, Injective) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(splitmix64(i));
    EXPECT_EQ(seen.size(), 10000u);
}
