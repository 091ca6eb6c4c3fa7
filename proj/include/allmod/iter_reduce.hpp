#pragma once

#include "allmod/modmath.hpp"
#include "allmod/trace.hpp"

namespace allmod {

/// Shift-subtract reduction of a w-bit input by an n-bit modulus in w - n
/// iterations. w = 2n is the standalone baseline; w = n + m is the hybrid's
/// low workload.
struct IterConfig {
    unsigned input_width = 0;
    unsigned modulus_width = 0;

    static IterConfig make(unsigned input_width, unsigned modulus_width);
    unsigned iterations() const noexcept { return input_width - modulus_width; }
};

struct SubtractStep {
    BigUint value;
    bool fired = false;
};

/// state - shifted_m if state >= shifted_m, else state.
SubtractStep conditional_subtract_shift(const BigUint& state, const BigUint& shifted_m);

struct IterReduction {
    BigUint value;
    ReductionTrace trace;
    unsigned subtractions = 0;   // iterations whose subtract fired
    bool final_adjust = false;   // the appended canonicalizing subtract fired
};

/// The w - n aligned iterations only. The result is congruent to a and < 2M.
IterReduction reduce_iterative_partial(const Operand& a, const Modulus& m, const IterConfig& cfg);

/// Partial reduction plus one conditional subtract, giving a mod M. The
/// extra step shares the last iteration's cycle, so total_cycles stays w - n.
IterReduction reduce_iterative(const Operand& a, const Modulus& m, const IterConfig& cfg);

}  // namespace allmod
