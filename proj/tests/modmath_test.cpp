#include <gtest/gtest.h>

#include "allmod/errors.hpp"
#include "allmod/modmath.hpp"
#include "test_support.hpp"

namespace allmod {
namespace {

using testing::Gen;

TEST(BitHelpers, SmallValues) {
    EXPECT_EQ(bit_length(0), 0u);
    EXPECT_EQ(bit_length(1), 1u);
    EXPECT_EQ(bit_length(pow2(200)), 201u);
    EXPECT_EQ(ceil_log2(0), 0u);
    EXPECT_EQ(ceil_log2(1), 0u);
    EXPECT_EQ(ceil_log2(2), 1u);
    EXPECT_EQ(ceil_log2(15), 4u);
    EXPECT_EQ(ceil_log2(16), 4u);
    EXPECT_EQ(ceil_log2(17), 5u);
    EXPECT_EQ(bit_width_of(0), 0u);
    EXPECT_EQ(bit_width_of(16), 5u);
    EXPECT_EQ(bit_width_of(15), 4u);
}

TEST(Operand, RejectsValuesWiderThanDeclared) {
    EXPECT_NO_THROW(Operand(255, 8));
    EXPECT_THROW(Operand(256, 8), BoundsError);
    EXPECT_THROW(Operand(1, 0), BoundsError);
}

TEST(Operand, HexIsPaddedToWidth) {
    EXPECT_EQ(Operand(0xff, 16).to_hex(), "00ff");
    EXPECT_EQ(Operand(0x1, 9).to_hex(), "001");
    EXPECT_EQ(Operand::from_hex("0xAB_cd", 16).value(), 0xabcd);
    EXPECT_THROW(Operand::from_hex("1ffff", 16), BoundsError);
}

TEST(Modulus, RequiresTopBitSet) {
    EXPECT_NO_THROW(Modulus(13, 4));
    EXPECT_THROW(Modulus(7, 4), InvalidModulusError);
    EXPECT_THROW(Modulus(16, 4), InvalidModulusError);
    EXPECT_THROW(Modulus(1, 1), InvalidModulusError);
}

TEST(Hex, ParseRejectsGarbage) {
    EXPECT_EQ(parse_hex("0x0"), 0);
    EXPECT_EQ(parse_hex("DEAD_beef"), BigUint(0xdeadbeefu));
    EXPECT_THROW(parse_hex(""), FormatError);
    EXPECT_THROW(parse_hex("0x"), FormatError);
    EXPECT_THROW(parse_hex("12g4"), FormatError);
    EXPECT_THROW(parse_hex("-1"), FormatError);
}

TEST(Hex, RoundTripsRandomValues) {
    Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const unsigned w = static_cast<unsigned>(g.uniform(1, 3000));
        const Operand a = g.operand(w);
        EXPECT_EQ(Operand::from_hex(a.to_hex(), w), a);
        EXPECT_EQ(a.to_hex().size(), (w + 3) / 4);
    }
}

TEST(Segments, Examples) {
    auto values = [](const std::vector<Segment>& s) {
        std::vector<std::uint32_t> v;
        for (const auto& x : s) v.push_back(x.value);
        return v;
    };
    EXPECT_EQ(values(segment_value(45, 2)), (std::vector<std::uint32_t>{1, 3, 2}));
    EXPECT_EQ(values(segment_value(0, 4)), (std::vector<std::uint32_t>{0}));
    EXPECT_EQ(values(segment_value(255, 8)), (std::vector<std::uint32_t>{255}));
    EXPECT_EQ(values(segment_value(0, 4, 3)), (std::vector<std::uint32_t>{0, 0, 0}));
    EXPECT_THROW(segment_value(256, 8, 1), BoundsError);
}

BigUint recombine(const std::vector<Segment>& segs, unsigned k) {
    BigUint v = 0;
    for (const auto& s : segs) {
        EXPECT_LT(s.value, 1u << k);
        EXPECT_EQ(s.width, k);
        v += BigUint(s.value) << (k * s.index);
    }
    return v;
}

TEST(Segments, RoundTripExhaustive16Bit) {
    for (unsigned k : {1u, 3u, 8u, 13u}) {
        for (std::uint32_t v = 0; v < (1u << 16); ++v) {
            const auto segs = segment_value(v, k, (16 + k - 1) / k);
            ASSERT_EQ(recombine(segs, k), v) << "k=" << k;
        }
    }
}

TEST(Segments, RoundTripRandom2048Bit) {
    Gen g(7);
    for (int i = 0; i < 10000; ++i) {
        const unsigned k = static_cast<unsigned>(g.uniform(1, kMaxSegmentWidth));
        const BigUint v = g.bits(2048);
        const auto segs = segment_value(v, k, (2048 + k - 1) / k);
        ASSERT_EQ(recombine(segs, k), v);
    }
}

TEST(SliceBits, DisjointCoverReconstructs) {
    Gen g(3);
    for (int i = 0; i < 2000; ++i) {
        const unsigned w = static_cast<unsigned>(g.uniform(1, 700));
        const Operand a = g.operand(w);
        BigUint rebuilt = 0;
        for (unsigned off = 0; off < w;) {
            const unsigned len = std::min<unsigned>(w - off, static_cast<unsigned>(g.uniform(1, 90)));
            rebuilt |= slice_bits(a, off, len) << off;
            off += len;
        }
        ASSERT_EQ(rebuilt, a.value());
    }
    EXPECT_THROW(slice_bits(Operand(1, 8), 4, 5), BoundsError);
}

TEST(ModOracle, AgreesWithGmpAndStaysBelowModulus) {
    Gen g(5);
    for (int i = 0; i < 5000; ++i) {
        const unsigned n = static_cast<unsigned>(g.uniform(2, 1100));
        const Modulus m = g.modulus(n);
        const Operand a = g.operand(2 * n);
        const Operand r = mod_oracle(a, m);
        ASSERT_LT(r.value(), m.value());
        ASSERT_EQ(r.value(), testing::gmp_mod(a.value(), m.value()));
        ASSERT_EQ(r.width(), n);
    }
}

}  // namespace
}  // namespace allmod
