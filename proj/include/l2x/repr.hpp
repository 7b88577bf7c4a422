#pragma once

#include "l2x/ball.hpp"
#include "l2x/dyadic.hpp"
#include "l2x/poly.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace l2x::repr {

// Raw oracle signatures. Oracles must be pure: same query, same answer.
using CoeffOracle = std::function<GInt(long long k, long n)>;
using AvgOracle = std::function<GInt(long long S, long long s, long n)>;
using RowOracle = std::function<std::vector<GInt>(long long S, long n)>;
using PageOracle = std::function<std::vector<GInt>(long n)>;
// Certified reference for exact audits: rational enclosure of the true step
// average f_hat_{S,s}, with radius shrinking in `prec`.
using StepRefOracle = std::function<QBall(long long S, long long s, unsigned prec)>;

// ---------------------------------------------------------------------------
// FourierRep: coefficient oracle with |f~_k - c_{k,n}/2^n| <= 2^-n, plus the
// tail-bound polynomial and a coefficient bound F with max_k |f~_k| <= F.
// Queries are memoized by exact (k, n); representations are shareable values.
// ---------------------------------------------------------------------------
class FourierRep {
public:
    FourierRep(CoeffOracle oracle, TailBound tail, mpz_class coeff_bound);

    GInt coeff(long long k, long n) const;
    const TailBound& tail() const;
    const mpz_class& coeff_bound() const;

    bool has_step_reference() const;
    QBall step_reference(long long S, long long s, unsigned prec) const;
    void set_step_reference(StepRefOracle ref);

    // builtins (each supplies a proven tail polynomial, documented inline)
    static FourierRep constant(const QComplex& c);
    static FourierRep mode(long long k0);
    static FourierRep trig_polynomial(std::vector<std::pair<long long, QComplex>> modes);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// StepRep: step-average oracle with |f^_{S,s} - h_{S,s,n}/2^n| <= 2^-n for
// every step individually.
// ---------------------------------------------------------------------------
class StepRep {
public:
    StepRep(AvgOracle oracle, TailBound tail);
    StepRep(AvgOracle oracle, RowOracle row, TailBound tail);

    GInt avg(long long S, long long s, long n) const;
    // All S averages at once; builtins with an iterated fast path use it here.
    std::vector<GInt> page(long long S, long n) const;
    const TailBound& tail() const;

    static StepRep constant(const QComplex& c);
    static StepRep mode(long long k0); // f(t) = exp(2 pi i k0 t)
    static StepRep ramp();             // f(t) = t
    static StepRep table(long long S_tab, std::vector<QComplex> heights);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// MeanStepRep: per-precision page of S(n) = 2^{width_poly(n)} averages whose
// error is bounded in root-mean-square over the page rather than per step.
// ---------------------------------------------------------------------------
class MeanStepRep {
public:
    MeanStepRep(PageOracle page, Poly width_poly, TailBound tail);

    const std::vector<GInt>& page(long n) const; // memoized per n
    long long width(long n) const;               // S(n); throws BudgetExceeded
    const Poly& width_poly() const;
    const TailBound& tail() const;

    static MeanStepRep from_step(const StepRep& st, Poly width_poly);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

// Ball around c_{k,n}/2^n with radius 2^-n.
Ball coeff_ball(const FourierRep& f, long long k, long n);

// Ball enclosing F_K(f, t) = sum_{|k|<=K} f~_k exp(2 pi i k t), radius <= 2^-n.
Ball partial_sum_eval(const FourierRep& f, long long K, const mpq_class& t, long n);

// Ball for the step value S_S(f, t) = f^_{S, floor(S t)}.
Ball step_eval(const StepRep& st, long long S, const mpq_class& t, long n);

// Exact rational M with ||f||_2 <= M, from the n=1 coefficients below the
// constant-tail cutoff K0 = 2^{p(0)} plus the unit tail term.
mpq_class norm_upper_bound(const FourierRep& f);

// Exponent e with S = 2^e from a width polynomial, budget-checked.
long width_exponent_checked(const Poly& p, long n);

} // namespace l2x::repr
