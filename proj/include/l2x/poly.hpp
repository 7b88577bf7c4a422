#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace l2x {

// Polynomial with non-negative integer coefficients, p(m) = sum coeffs[j]*m^j.
// Non-negative coefficients make p non-decreasing on the naturals, which is
// all the tail-bound and modulus machinery relies on.
struct Poly {
    std::vector<std::uint64_t> coeffs;

    Poly() = default;
    explicit Poly(std::vector<std::uint64_t> c) : coeffs(std::move(c)) {}
    static Poly constant(std::uint64_t c) { return Poly({c}); }
    static Poly linear(std::uint64_t c0, std::uint64_t c1) { return Poly({c0, c1}); }

    mpz_class eval(std::uint64_t m) const {
        mpz_class acc = 0;
        mpz_class pow = 1;
        for (std::uint64_t c : coeffs) {
            acc += c * pow;
            pow *= m;
        }
        return acc;
    }

    bool is_zero() const {
        for (std::uint64_t c : coeffs)
            if (c != 0) return false;
        return true;
    }
};

// Tail-bound metadata for a representation: ||f - F_K(f)||_2 <= 2^-m holds
// for K = 2^{poly(m)} (and the analogous statement for step truncation).
// `finite_cutoff`, when set, records that the function is a finite
// trigonometric polynomial: the truncation error vanishes identically for
// K >= finite_cutoff. Carried as explicit trusted data; every builtin
// constructor supplies a proven-valid polynomial.
struct TailBound {
    Poly poly;
    std::optional<std::int64_t> finite_cutoff;

    TailBound() = default;
    explicit TailBound(Poly p) : poly(std::move(p)) {}
    TailBound(Poly p, std::int64_t cutoff) : poly(std::move(p)), finite_cutoff(cutoff) {}
};

} // namespace l2x
