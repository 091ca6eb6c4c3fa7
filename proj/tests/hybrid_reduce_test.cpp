#include <sstream>

#include <gtest/gtest.h>

#include "allmod/errors.hpp"
#include "allmod/hybrid_reduce.hpp"
#include "allmod/iter_reduce.hpp"
#include "allmod/lut_reduce.hpp"
#include "allmod/perf_model.hpp"
#include "test_support.hpp"

namespace allmod {
namespace {

using testing::Gen;

constexpr unsigned kTableWidths[] = {128, 256, 512, 1024, 2048, 4096, 8192};

TEST(BalancedM, WorkloadsFinishTogether) {
    for (unsigned n : kTableWidths) {
        const unsigned k = LutGeometry::derive(n).k;
        const auto split = HybridSplit::balanced(n, k);
        const auto d = static_cast<long long>(split.d());
        EXPECT_LE(std::llabs(d + 1 - static_cast<long long>(split.m)), 1) << n;
    }
}

TEST(BalancedM, MinimisesCoreLatencyWithoutTree) {
    for (unsigned n : kTableWidths) {
        const unsigned k = LutGeometry::derive(n).k;
        const unsigned mb = balanced_m(n, k);
        std::uint64_t best = ~std::uint64_t{0};
        for (unsigned m = 0; m <= n; ++m) best = std::min(best, latency_hybrid_core(n, k, m, 0));
        EXPECT_EQ(latency_hybrid_core(n, k, mb, 0), best) << n;
    }
}

TEST(BalancedM, BramSavingAt8192) {
    const unsigned k = LutGeometry::derive(8192).k;
    const auto split = HybridSplit::balanced(8192, k);
    EXPECT_EQ(split.d(), 2731u);
    EXPECT_EQ(LutGeometry::derive(8192).d, 4096u);
    EXPECT_GE(static_cast<double>(split.m) / 8192, 1.0 / (k + 1) - 1.0 / 8192);
}

TEST(HybridSplit, RejectsOutOfRange) {
    EXPECT_THROW(HybridSplit::make(16, 2, 17), ConfigurationError);
    EXPECT_THROW(HybridSplit::make(16, 2, 4, 13), ConfigurationError);
    EXPECT_THROW(HybridSplit::make(16, 0, 4), ConfigurationError);
    EXPECT_NO_THROW(HybridSplit::make(16, 2, 4, 12));
}

TEST(HybridSplit, OperandRecombines) {
    Gen g(8);
    for (int i = 0; i < 2000; ++i) {
        const unsigned n = static_cast<unsigned>(g.uniform(2, 400));
        const unsigned m = static_cast<unsigned>(g.uniform(0, n));
        const auto split = HybridSplit::make(n, 3, m);
        const Operand a = g.operand(2 * n);
        const auto [hi, lo] = split_operand(a, split);
        ASSERT_LT(lo, pow2(n + m));
        ASSERT_LT(hi, pow2(n - m) + (n == m ? 1 : 0));
        ASSERT_EQ((hi << (n + m)) + lo, a.value());
    }
}

TEST(SerialAccumulate, SumsOnePerCycle) {
    const std::vector<BigUint> xs{3, 5, 7, 11};
    const auto acc = serial_accumulate(xs);
    EXPECT_EQ(acc.sum, 26);
    EXPECT_EQ(acc.cycles, 4u);
    EXPECT_THROW(serial_accumulate(std::span<const BigUint>{}), BoundsError);
}

TEST(FuseAndAdjust, Examples) {
    const Modulus m(13, 4);
    EXPECT_EQ(fuse_and_adjust(0, 0, 0, m).value, 0);
    EXPECT_EQ(fuse_and_adjust(5, 3, 12, m).value, 7);
    EXPECT_THROW(fuse_and_adjust(16, 0, 0, m), InvariantError);
    EXPECT_THROW(fuse_and_adjust(0, 13, 0, m), InvariantError);
}

TEST(FuseAndAdjust, AtMostFourSubtractionsAtBounds) {
    unsigned worst = 0;
    for (unsigned mv = 8; mv < 16; ++mv) {
        const Modulus m(mv, 4);
        for (unsigned lo = 0; lo < 16; ++lo)
            for (unsigned ov = 0; ov < mv; ++ov)
                for (unsigned it = 0; it < 2 * mv; ++it) {
                    const auto r = fuse_and_adjust(lo, ov, it, m);
                    ASSERT_EQ(r.value, (lo + ov + it) % mv);
                    ASSERT_LT(r.pre_adjust, 16 + 3 * mv);
                    worst = std::max(worst, r.subtractions);
                }
    }
    EXPECT_LE(worst, 4u);
    EXPECT_GE(worst, 3u);
}

void check_hybrid(const Operand& a, const Modulus& m, const HybridSplit& split, const HybridTables& tables) {
    const auto r = reduce_hybrid(a, m, split, tables);
    ASSERT_EQ(r.residue.value(), testing::gmp_mod(a.value(), m.value()))
        << "n=" << split.n << " m=" << split.m << " wt=" << split.width_tree;
    ASSERT_LT(r.fused_sum, pow2(split.n) + 3 * m.value());
    ASSERT_LE(r.adjust_steps, 4u);
    ASSERT_EQ(r.trace.total_cycles(), latency_hybrid_end_to_end(split.n, split.k, split.m, split.width_tree));
}

TEST(ReduceHybrid, ExhaustiveN4) {
    for (unsigned mv = 8; mv < 16; ++mv) {
        const Modulus m(mv, 4);
        for (unsigned k = 1; k <= 4; ++k)
            for (unsigned sm = 0; sm <= 4; ++sm)
                for (unsigned wt = 0; wt <= 4 - sm; ++wt) {
                    const auto split = HybridSplit::make(4, k, sm, wt);
                    const auto tables = HybridTables::build(m, split);
                    for (unsigned a = 0; a < 256; ++a) check_hybrid(Operand(a, 8), m, split, tables);
                }
    }
}

TEST(ReduceHybrid, RandomBalanced) {
    Gen g(55);
    for (unsigned n : {16u, 64u, 128u}) {
        const unsigned k = LutGeometry::derive(n).k;
        const auto split = HybridSplit::balanced(n, k);
        for (int mi = 0; mi < 100; ++mi) {
            const Modulus m = g.modulus(n);
            const HybridEngine engine(m, split);
            for (int i = 0; i < 100; ++i) {
                const Operand a = g.operand(2 * n);
                const auto r = engine.reduce(a);
                ASSERT_EQ(r.residue.value(), testing::gmp_mod(a.value(), m.value()));
                ASSERT_EQ(r.trace.total_cycles(), latency_hybrid_end_to_end(n, k, split.m, 0));
            }
        }
    }
}

TEST(ReduceHybrid, RandomSplitsAndTrees) {
    Gen g(56);
    for (int t = 0; t < 300; ++t) {
        const unsigned n = static_cast<unsigned>(g.uniform(3, 200));
        const unsigned k = static_cast<unsigned>(g.uniform(1, 8));
        const unsigned sm = static_cast<unsigned>(g.uniform(0, n));
        const unsigned wt = static_cast<unsigned>(g.uniform(0, n - sm));
        const auto split = HybridSplit::make(n, k, sm, wt);
        const Modulus m = g.modulus(n);
        const auto tables = HybridTables::build(m, split);
        for (int i = 0; i < 10; ++i) check_hybrid(g.operand(2 * n), m, split, tables);
    }
}

TEST(ReduceHybrid, EndpointsMatchPureEngines) {
    Gen g(57);
    for (unsigned n : {16u, 64u}) {
        const unsigned k = LutGeometry::derive(n).k;
        for (int i = 0; i < 200; ++i) {
            const Modulus m = g.modulus(n);
            const Operand a = g.operand(2 * n);
            const auto lut = reduce_lut(a, m, LutGeometry::derive(n));
            const auto iter = reduce_iterative(a, m, IterConfig::make(2 * n, n));
            const auto s0 = HybridSplit::make(n, k, 0);
            const auto sn = HybridSplit::make(n, k, n);
            EXPECT_EQ(reduce_hybrid(a, m, s0, HybridTables::build(m, s0)).residue, lut.residue);
            EXPECT_EQ(reduce_hybrid(a, m, sn, HybridTables::build(m, sn)).residue.value(), iter.value);
        }
    }
}

TEST(HybridTables, OverflowFitsSpareCapacityUpTo2048) {
    Gen g(2);
    for (unsigned n : kTableWidths) {
        const auto split = HybridSplit::balanced(n, LutGeometry::derive(n).k);
        const auto tables = HybridTables::build(g.modulus(n), split);
        EXPECT_EQ(tables.overflow_fits_spare(kDefaultBramCapacityBits), n <= 2048) << n;
    }
}

TEST(HybridTables, BundleRoundTrip) {
    Gen g(3);
    const auto split = HybridSplit::make(100, 4, 20, 3);
    const auto tables = HybridTables::build(g.modulus(100), split);
    std::stringstream ss;
    tables.write(ss, split);
    const auto [split2, tables2] = HybridTables::read(ss);
    EXPECT_EQ(split2, split);
    EXPECT_EQ(tables2.main, tables.main);
    EXPECT_EQ(tables2.overflow, tables.overflow);
}

}  // namespace
}  // namespace allmod
