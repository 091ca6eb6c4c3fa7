#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <gmpxx.h>

#include "allmod/modmath.hpp"

namespace allmod::testing {

/// Independent arbitrary-precision reference (GMP), crossing through hex text.
inline mpz_class to_mpz(const BigUint& v) { return mpz_class(format_hex(v), 16); }
inline BigUint from_mpz(const mpz_class& v) { return parse_hex(v.get_str(16)); }

inline BigUint gmp_mod(const BigUint& a, const BigUint& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), to_mpz(a).get_mpz_t(), to_mpz(m).get_mpz_t());
    return from_mpz(r);
}

/// (a * 2^e) mod m, via GMP.
inline BigUint gmp_shifted_mod(std::uint64_t a, unsigned e, const BigUint& m) {
    mpz_class v(static_cast<unsigned long>(a));
    mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), e);
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), to_mpz(m).get_mpz_t());
    return from_mpz(r);
}

/// Seeded generator; edge values are mixed in at a fixed rate.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(eng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

    /// Uniform value below 2^width.
    BigUint bits(unsigned width) {
        BigUint v = 0;
        for (unsigned done = 0; done < width; done += 64) {
            const unsigned take = std::min(64u, width - done);
            std::uint64_t chunk = eng_();
            if (take < 64) chunk &= (std::uint64_t{1} << take) - 1;
            v |= BigUint(chunk) << done;
        }
        return v;
    }

    /// Operand of the given width, biased towards all-zero / all-one / top bit patterns.
    Operand operand(unsigned width) {
        switch (uniform(0, 15)) {
            case 0: return Operand(0, width);
            case 1: return Operand(pow2(width) - 1, width);
            case 2: return Operand(pow2(width - 1), width);
            default: return Operand(bits(width), width);
        }
    }

    /// n-bit modulus with the top bit set, biased towards 2^(n-1), 2^n - 1.
    Modulus modulus(unsigned n) {
        switch (uniform(0, 15)) {
            case 0: return Modulus(pow2(n - 1), n);
            case 1: return Modulus(pow2(n) - 1, n);
            case 2: return Modulus(pow2(n - 1) + 1, n);
            default: return Modulus(pow2(n - 1) | bits(n - 1), n);
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace allmod::testing
