#include "allmod/iter_reduce.hpp"

#include <string>

namespace allmod {

IterConfig IterConfig::make(unsigned input_width, unsigned modulus_width) {
    if (modulus_width < 2) throw ConfigurationError("modulus width must be at least 2 bits");
    if (input_width <= modulus_width)
        throw ConfigurationError("iterative input width " + std::to_string(input_width) +
                                 " must exceed modulus width " + std::to_string(modulus_width));
    return IterConfig{input_width, modulus_width};
}

SubtractStep conditional_subtract_shift(const BigUint& state, const BigUint& shifted_m) {
    if (shifted_m <= 0) throw BoundsError("shifted modulus must be positive");
    if (state >= shifted_m) return {state - shifted_m, true};
    return {state, false};
}

IterReduction reduce_iterative_partial(const Operand& a, const Modulus& m, const IterConfig& cfg) {
    if (a.width() != cfg.input_width)
        throw ConfigurationError("operand width " + std::to_string(a.width()) + " != configured " +
                                 std::to_string(cfg.input_width));
    if (m.width() != cfg.modulus_width)
        throw ConfigurationError("modulus width " + std::to_string(m.width()) + " != configured " +
                                 std::to_string(cfg.modulus_width));
    if (cfg.input_width <= cfg.modulus_width) throw ConfigurationError("input width must exceed n");

    IterReduction out;
    out.value = a.value();
    const unsigned iters = cfg.iterations();
    BigUint shifted = m.value() << iters;
    for (unsigned s = iters; s >= 1; --s) {
        detail::check_invariant(out.value < (shifted << 1), "iterative state not below 2*(M << s)");
        const BigUint low_before = extract_bits(out.value, 0, s);
        auto step = conditional_subtract_shift(out.value, shifted);
        detail::check_invariant(step.value < shifted, "iterative state not below M << s");
        // the aligned modulus has s zero low bits, so the subtractor never touches them
        detail::check_invariant(extract_bits(step.value, 0, s) == low_before,
                                "subtract modified bits below the shift offset");
        out.value = std::move(step.value);
        const std::uint64_t cycle = iters - s + 1;
        out.trace.add(cycle, Unit::subtract, "shift " + std::to_string(s) + (step.fired ? " fired" : " skipped"));
        out.trace.add(cycle, Unit::shift, "M >> 1");
        if (step.fired) ++out.subtractions;
        shifted >>= 1;
    }
    detail::check_invariant(out.value < (m.value() << 1), "iterative result not below 2M");
    return out;
}

IterReduction reduce_iterative(const Operand& a, const Modulus& m, const IterConfig& cfg) {
    IterReduction out = reduce_iterative_partial(a, m, cfg);
    if (out.value >= m.value()) {
        out.value -= m.value();
        out.final_adjust = true;
    }
    out.trace.add(cfg.iterations(), Unit::adjust, out.final_adjust ? "final subtract fired" : "final subtract skipped");
    return out;
}

}  // namespace allmod
