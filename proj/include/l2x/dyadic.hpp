#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace l2x {

// ---------------------------------------------------------------------------
// Small integer helpers shared across the numeric layer.
// ---------------------------------------------------------------------------

// Number of bits of |v|, with bitlen(0) = 0.
std::size_t bitlen(const mpz_class& v);

// Smallest g >= 0 with 2^g >= v, for v >= 1.
long clog2(const mpz_class& v);
long clog2_q(const mpq_class& v); // same for rationals >= 1; returns 0 for v <= 1

// Round v / 2^shift to the nearest integer, ties to even.
mpz_class round_shift_half_even(const mpz_class& v, unsigned long shift);

// Round an exact rational to the nearest integer, ties to even.
mpz_class round_q_half_even(const mpq_class& v);

// floor/ceil integer square roots (v >= 0).
mpz_class isqrt_floor(const mpz_class& v);
mpz_class isqrt_ceil(const mpz_class& v);

// Rational upper/lower bounds on sqrt(q), q >= 0, accurate to ~2^-prec.
mpq_class q_sqrt_ub(const mpq_class& q, unsigned prec = 32);
mpq_class q_sqrt_lb(const mpq_class& q, unsigned prec = 32);

// Exact rational 2^e for signed e.
mpq_class q_pow2(long e);

// ---------------------------------------------------------------------------
// Dyadic: exact binary rational man * 2^-sc.
//
// Canonical form: man is odd, or man == 0 with sc == 0. All arithmetic on
// this type is exact; nothing here ever rounds.
// ---------------------------------------------------------------------------
class Dyadic {
public:
    Dyadic() : man_(0), sc_(0) {}
    Dyadic(const mpz_class& mantissa, long scale) : man_(mantissa), sc_(scale) { canonicalize(); }
    explicit Dyadic(long v) : man_(v), sc_(0) { canonicalize(); }

    static Dyadic zero() { return Dyadic(); }
    static Dyadic one() { return Dyadic(1); }
    // 2^e
    static Dyadic pow2(long e) { return Dyadic(1, -e); }
    // Exact conversion; throws ValidationError if q is not dyadic.
    static Dyadic from_mpq(const mpq_class& q);

    const mpz_class& mantissa() const { return man_; }
    long scale() const { return sc_; }
    bool is_zero() const { return man_ == 0; }
    int sign() const { return sgn(man_); }

    mpq_class to_mpq() const;

    Dyadic operator-() const { return Dyadic(-man_, sc_, already_canonical{}); }
    Dyadic abs() const { return man_ < 0 ? -*this : *this; }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

    // Exact multiplication by 2^e.
    Dyadic mul_pow2(long e) const {
        if (man_ == 0) return *this;
        return Dyadic(man_, sc_ - e, already_canonical{});
    }

    // Comparison of exact values.
    friend int compare(const Dyadic& a, const Dyadic& b);
    friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0; }
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.man_ == b.man_ && a.sc_ == b.sc_; }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }

    // Value rounded toward +inf (resp. -inf) to at most `bits` mantissa bits.
    Dyadic round_up_bits(unsigned bits) const;
    Dyadic round_down_bits(unsigned bits) const;

    std::string str() const; // "man*2^-sc", exact

private:
    struct already_canonical {};
    Dyadic(mpz_class m, long s, already_canonical) : man_(std::move(m)), sc_(s) {}
    void canonicalize();

    mpz_class man_;
    long sc_;
};

// ---------------------------------------------------------------------------
// Complex layers: exact Gaussian dyadics, Gaussian integers, and exact
// rational complex numbers.
// ---------------------------------------------------------------------------
struct GaussianDyadic {
    Dyadic re, im;

    GaussianDyadic() = default;
    GaussianDyadic(Dyadic r, Dyadic i) : re(std::move(r)), im(std::move(i)) {}
    explicit GaussianDyadic(long r) : re(Dyadic(r)), im() {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    GaussianDyadic operator-() const { return {-re, -im}; }
    GaussianDyadic conj() const { return {re, -im}; }
    // Multiplication by i.
    GaussianDyadic mul_i() const { return {-im, re}; }
    GaussianDyadic mul_pow2(long e) const { return {re.mul_pow2(e), im.mul_pow2(e)}; }

    friend GaussianDyadic operator+(const GaussianDyadic& a, const GaussianDyadic& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianDyadic operator-(const GaussianDyadic& a, const GaussianDyadic& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianDyadic operator*(const GaussianDyadic& a, const GaussianDyadic& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianDyadic& a, const GaussianDyadic& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Gaussian integer; oracles hand these out together with a scale exponent.
struct GInt {
    mpz_class re, im;

    GInt() : re(0), im(0) {}
    GInt(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}
    explicit GInt(long r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }

    friend GInt operator+(const GInt& a, const GInt& b) { return {a.re + b.re, a.im + b.im}; }
    friend GInt operator-(const GInt& a, const GInt& b) { return {a.re - b.re, a.im - b.im}; }
    friend GInt operator*(const GInt& a, const GInt& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GInt& a, const GInt& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GInt& a, const GInt& b) { return !(a == b); }

    GaussianDyadic at_scale(long n) const {
        return {Dyadic(re, n), Dyadic(im, n)};
    }
};

// Exact rational complex number.
struct QComplex {
    mpq_class re, im;

    QComplex() : re(0), im(0) {}
    QComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
    explicit QComplex(long r) : re(r), im(0) {}

    static QComplex from_dyadic(const GaussianDyadic& g) { return {g.re.to_mpq(), g.im.to_mpq()}; }

    bool is_zero() const { return re == 0 && im == 0; }
    mpq_class norm2() const { return re * re + im * im; } // |z|^2, exact

    QComplex conj() const { return {re, -im}; }
    QComplex operator-() const { return {-re, -im}; }
    friend QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend QComplex operator*(const QComplex& a, const QComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
};

// ---------------------------------------------------------------------------
// Rounding between layers.
// ---------------------------------------------------------------------------

// Nearest Gaussian integer at scale 2^-n (ties half-to-even per component):
// |x - v/2^n| <= (sqrt2/2) * 2^-n. Requires n >= 0.
GInt round_to_scale(const GaussianDyadic& x, long n);
GInt round_to_scale_q(const QComplex& x, long n);
mpz_class round_to_scale_q1(const mpq_class& x, long n);

} // namespace l2x
