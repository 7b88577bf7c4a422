#pragma once

#include "l2x/dyadic.hpp"

#include <span>
#include <vector>

namespace l2x {

// Radii are rounded up to this many mantissa bits after every operation.
// Rounding is always upward, so enclosure soundness is preserved.
inline constexpr unsigned kRadiusBits = 16;

// Dyadic upper bound on |g| (complex modulus).
Dyadic modulus_ub(const GaussianDyadic& g);

// ---------------------------------------------------------------------------
// Ball: exact Gaussian-dyadic center plus a dyadic radius bounding the
// distance (in the complex modulus) to the exact value represented.
// ---------------------------------------------------------------------------
struct Ball {
    GaussianDyadic center;
    Dyadic radius; // >= 0

    Ball() = default;
    explicit Ball(GaussianDyadic c) : center(std::move(c)), radius() {}
    Ball(GaussianDyadic c, Dyadic r);

    static Ball exact(long v) { return Ball(GaussianDyadic(v)); }

    bool is_exact() const { return radius.is_zero(); }

    // True if the exact rational point z provably lies in the ball.
    bool contains(const QComplex& z) const;
};

Ball ball_add(const Ball& a, const Ball& b);
Ball ball_sub(const Ball& a, const Ball& b);
Ball ball_mul(const Ball& a, const Ball& b);
// As ball_mul, but the product center is rounded to scale 2^-out_scale
// (rounding absorbed into the radius). Keeps mantissas bounded in long
// iterated products.
Ball ball_mul_at(const Ball& a, const Ball& b, long out_scale);
// Multiplication by exact values: no center error.
Ball ball_scale(const Ball& a, const GaussianDyadic& exact_factor);
Ball ball_mul_pow2(const Ball& a, long e);
// Multiplication by i^quarter_turns; modulus-preserving, radius unchanged.
Ball ball_rotate_i(const Ball& a, int quarter_turns);
// Rounds the center to scale 2^-n, widening the radius by the rounding error.
Ball ball_round_center(const Ball& a, long n);

// Balanced-tree sum: bounds radius inflation to O(log n) roundings per leaf
// and fixes the evaluation shape so results are reproducible.
Ball ball_sum(std::span<const Ball> terms);

enum class Separation { Below, Above, Undecided };

// Decides on which side of the gap (threshold_low, threshold_high) a real
// quantity lies. The caller asserts the ball encloses a real number; the
// center must have zero imaginary part.
Separation separate(const Ball& a, const Dyadic& threshold_low, const Dyadic& threshold_high);
Separation separate_q(const mpq_class& center, const mpq_class& radius,
                      const mpq_class& threshold_low, const mpq_class& threshold_high);

// ---------------------------------------------------------------------------
// QBall: the same enclosure idea over exact rationals. Internal workhorse for
// certified division and for audits that must produce exact rational bounds.
// ---------------------------------------------------------------------------
struct QBall {
    QComplex center;
    mpq_class radius; // >= 0

    QBall() : radius(0) {}
    explicit QBall(QComplex c) : center(std::move(c)), radius(0) {}
    QBall(QComplex c, mpq_class r) : center(std::move(c)), radius(std::move(r)) {}

    static QBall from_ball(const Ball& b) {
        return {QComplex::from_dyadic(b.center), b.radius.to_mpq()};
    }

    // Rational upper bound on |center|.
    mpq_class center_modulus_ub() const { return q_sqrt_ub(center.norm2()); }

    bool contains(const QComplex& z) const {
        return (z - center).norm2() <= radius * radius;
    }
};

QBall qball_add(const QBall& a, const QBall& b);
QBall qball_sub(const QBall& a, const QBall& b);
QBall qball_mul(const QBall& a, const QBall& b);
QBall qball_scale(const QBall& a, const QComplex& exact_factor);
QBall qball_mul_i(const QBall& a);
// Division by a real interval [lo, hi] with lo*hi > 0 (does not straddle 0).
QBall qball_div_real_interval(const QBall& a, const mpq_class& lo, const mpq_class& hi);
// Converts to a dyadic ball with center at scale 2^-n; rounding error and the
// dyadic radius round-up are absorbed into the radius.
Ball qball_to_ball(const QBall& a, long n);

} // namespace l2x
