#include <gtest/gtest.h>

#include "allmod/errors.hpp"
#include "allmod/iter_reduce.hpp"
#include "allmod/perf_model.hpp"
#include "test_support.hpp"

namespace allmod {
namespace {

using testing::Gen;

TEST(ConditionalSubtract, Examples) {
    auto a = conditional_subtract_shift(10, 16);
    EXPECT_EQ(a.value, 10);
    EXPECT_FALSE(a.fired);
    auto b = conditional_subtract_shift(20, 16);
    EXPECT_EQ(b.value, 4);
    EXPECT_TRUE(b.fired);
    EXPECT_THROW(conditional_subtract_shift(1, 0), BoundsError);
}

TEST(IterConfig, InputMustBeWiderThanModulus) {
    EXPECT_THROW(IterConfig::make(4, 4), ConfigurationError);
    EXPECT_THROW(IterConfig::make(8, 1), ConfigurationError);
    EXPECT_EQ(IterConfig::make(143, 128).iterations(), 15u);
}

TEST(ReduceIterative, ExhaustiveW8N4) {
    const auto cfg = IterConfig::make(8, 4);
    for (unsigned mv = 8; mv < 16; ++mv) {
        const Modulus m(mv, 4);
        for (unsigned a = 0; a < 256; ++a) {
            const auto partial = reduce_iterative_partial(Operand(a, 8), m, cfg);
            ASSERT_LT(partial.value, 2 * mv);
            ASSERT_EQ(partial.value % mv, a % mv);
            const auto full = reduce_iterative(Operand(a, 8), m, cfg);
            ASSERT_EQ(full.value, a % mv);
            ASSERT_EQ(full.trace.total_cycles(), 4u);
            ASSERT_EQ(full.trace.count(Unit::subtract), 4u);
        }
    }
}

TEST(ReduceIterative, RandomTrials) {
    Gen g(31);
    for (auto [w, n] : {std::pair{256u, 128u}, std::pair{143u, 128u}}) {
        const auto cfg = IterConfig::make(w, n);
        for (int i = 0; i < 10000; ++i) {
            const Modulus m = g.modulus(n);
            const Operand a = g.operand(w);
            const auto r = reduce_iterative(a, m, cfg);
            ASSERT_EQ(r.value, testing::gmp_mod(a.value(), m.value()));
            ASSERT_EQ(r.trace.total_cycles(), w - n);
        }
    }
}

TEST(ReduceIterative, StandaloneLatencyIsN) {
    Gen g(1);
    for (unsigned n : {16u, 128u, 300u}) {
        const auto r = reduce_iterative(g.operand(2 * n), g.modulus(n), IterConfig::make(2 * n, n));
        EXPECT_EQ(r.trace.total_cycles(), latency_iterative(n));
    }
}

}  // namespace
}  // namespace allmod
