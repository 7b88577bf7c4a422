#pragma once

#include "l2x/ball.hpp"
#include "l2x/dyadic.hpp"

#include <functional>

namespace l2x::kernel {

// Rational interval [lo, hi] enclosing an exact real constant.
struct QInterval {
    mpq_class lo, hi;
    mpq_class width() const { return hi - lo; }
    mpq_class mid() const { return (lo + hi) / 2; }
};

// Certified enclosures, width <= 2^-prec. Requests are rounded up to a fixed
// precision bucket before hitting the memo cache, so the interval returned
// for a given argument never depends on query history.
QInterval pi_interval(unsigned prec);
QInterval ln2_interval(unsigned prec);
QInterval sqrt2_interval(unsigned prec);
// Natural log of an exact positive rational.
QInterval ln_interval(const mpq_class& x, unsigned prec);

// Fractional part of an exact rational, in [0, 1).
mpq_class frac_mod1(const mpq_class& q);

// Ball enclosing exp(2*pi*i*q) for q in [0,1); radius <= 2^-n, center held at
// a guarded scale below 2^-n.
Ball exp2pi(const mpq_class& q, long n);

// Ball enclosing e^-x for dyadic x >= 0; radius <= 2^-n, value in [0,1].
// Arguments beyond (n+1)*ln2 short-circuit to the enclosure [0, 2^-n].
Ball exp_neg(const Dyadic& x, long n);

struct KernelQuery {
    long long S; // step count, >= 1
    long long s; // step index in [0, S)
    long long k; // frequency
    long n;      // precision exponent, >= 0
};

// Gaussian integer e_{S,s,k,n} with |e_{S,s,k} - e_{S,s,k,n}/2^n| <= 2^-n,
// where e_{S,s,k} is the average of exp(2*pi*i*k*t) over the s-th of S equal
// steps. e_{S,s,0,n} = 2^n exactly. Results are memoized by exact query.
GInt e_coeff(long long S, long long s, long long k, long n);
GInt e_coeff(const KernelQuery& q);

// Row evaluation: invokes fn(s, e-coefficient) for s = 0..S-1 with the same
// per-entry contract as e_coeff, using an iterated certified recurrence
// (one series evaluation per row instead of per entry). Values may differ
// from pointwise e_coeff within the shared tolerance.
void e_row_foreach(long long S, long long k, long n,
                   const std::function<void(long long, const GInt&)>& fn);

} // namespace l2x::kernel
