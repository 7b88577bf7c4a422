#include "l2x/ball.hpp"

#include <stdexcept>

namespace l2x {

namespace {

// Dyadic d >= q, with ~2^-bits resolution.
Dyadic dyadic_ub_of_q(const mpq_class& q, unsigned long bits = 24) {
    if (q == 0) return Dyadic();
    mpz_class num = q.get_num() << bits;
    mpz_class up;
    mpz_cdiv_q(up.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
    return Dyadic(up, long(bits));
}

} // namespace

Dyadic modulus_ub(const GaussianDyadic& g) {
    if (g.is_zero()) return Dyadic();
    Dyadic s = g.re * g.re + g.im * g.im;
    // Cap the mantissa before the integer sqrt; upward rounding keeps the bound.
    s = s.round_up_bits(48);
    mpz_class m = s.mantissa();
    long sc = s.scale();
    if (sc & 1) {
        m <<= 1;
        sc += 1;
    }
    return Dyadic(isqrt_ceil(m), sc / 2).round_up_bits(kRadiusBits);
}

Ball::Ball(GaussianDyadic c, Dyadic r) : center(std::move(c)), radius(std::move(r)) {
    if (radius.sign() < 0) throw std::domain_error("Ball radius must be >= 0");
    radius = radius.round_up_bits(kRadiusBits);
}

bool Ball::contains(const QComplex& z) const {
    QComplex d = z - QComplex::from_dyadic(center);
    mpq_class r = radius.to_mpq();
    return d.norm2() <= r * r;
}

Ball ball_add(const Ball& a, const Ball& b) {
    return Ball(a.center + b.center, a.radius + b.radius);
}

Ball ball_sub(const Ball& a, const Ball& b) {
    return Ball(a.center - b.center, a.radius + b.radius);
}

Ball ball_mul(const Ball& a, const Ball& b) {
    Dyadic r = modulus_ub(a.center) * b.radius + modulus_ub(b.center) * a.radius +
               a.radius * b.radius;
    return Ball(a.center * b.center, r);
}

Ball ball_mul_at(const Ball& a, const Ball& b, long out_scale) {
    return ball_round_center(ball_mul(a, b), out_scale);
}

Ball ball_scale(const Ball& a, const GaussianDyadic& exact_factor) {
    return Ball(a.center * exact_factor, modulus_ub(exact_factor) * a.radius);
}

Ball ball_mul_pow2(const Ball& a, long e) {
    return Ball(a.center.mul_pow2(e), a.radius.mul_pow2(e));
}

Ball ball_rotate_i(const Ball& a, int quarter_turns) {
    int q = ((quarter_turns % 4) + 4) % 4;
    GaussianDyadic c = a.center;
    switch (q) {
        case 1: c = c.mul_i(); break;
        case 2: c = -c; break;
        case 3: c = (-c).mul_i(); break;
        default: break;
    }
    return Ball(c, a.radius);
}

Ball ball_round_center(const Ball& a, long n) {
    GInt v = round_to_scale(a.center, n);
    // per-component rounding <= 2^-(n+1), complex modulus <= (sqrt2/2)*2^-n <= 3*2^-(n+2)
    return Ball(v.at_scale(n), a.radius + Dyadic(3, n + 2));
}

namespace {
Ball ball_sum_rec(std::span<const Ball> t) {
    if (t.empty()) return Ball();
    if (t.size() == 1) return t[0];
    std::size_t mid = t.size() / 2;
    return ball_add(ball_sum_rec(t.subspan(0, mid)), ball_sum_rec(t.subspan(mid)));
}
} // namespace

Ball ball_sum(std::span<const Ball> terms) { return ball_sum_rec(terms); }

Separation separate(const Ball& a, const Dyadic& threshold_low, const Dyadic& threshold_high) {
    if (!(threshold_low < threshold_high))
        throw std::domain_error("separate: thresholds must satisfy low < high");
    if (!a.center.im.is_zero())
        throw std::domain_error("separate: ball center must be real");
    Dyadic lo_end = a.center.re - a.radius;
    Dyadic hi_end = a.center.re + a.radius;
    if (hi_end < threshold_high && lo_end <= threshold_low) return Separation::Below;
    if (lo_end > threshold_low && hi_end >= threshold_high) return Separation::Above;
    return Separation::Undecided;
}

Separation separate_q(const mpq_class& center, const mpq_class& radius,
                      const mpq_class& threshold_low, const mpq_class& threshold_high) {
    if (!(threshold_low < threshold_high))
        throw std::domain_error("separate: thresholds must satisfy low < high");
    mpq_class lo_end = center - radius;
    mpq_class hi_end = center + radius;
    if (hi_end < threshold_high && lo_end <= threshold_low) return Separation::Below;
    if (lo_end > threshold_low && hi_end >= threshold_high) return Separation::Above;
    return Separation::Undecided;
}

// --- QBall ------------------------------------------------------------------

QBall qball_add(const QBall& a, const QBall& b) {
    return {a.center + b.center, a.radius + b.radius};
}

QBall qball_sub(const QBall& a, const QBall& b) {
    return {a.center - b.center, a.radius + b.radius};
}

QBall qball_mul(const QBall& a, const QBall& b) {
    mpq_class r = a.center_modulus_ub() * b.radius + b.center_modulus_ub() * a.radius +
                  a.radius * b.radius;
    return {a.center * b.center, r};
}

QBall qball_scale(const QBall& a, const QComplex& exact_factor) {
    return {a.center * exact_factor, q_sqrt_ub(exact_factor.norm2()) * a.radius};
}

QBall qball_mul_i(const QBall& a) {
    return {QComplex(-a.center.im, a.center.re), a.radius};
}

QBall qball_div_real_interval(const QBall& a, const mpq_class& lo, const mpq_class& hi) {
    if (!(lo <= hi) || sgn(lo) * sgn(hi) <= 0)
        throw std::domain_error("qball_div_real_interval: interval must not straddle 0");
    mpq_class mid = (lo + hi) / 2;
    mpq_class min_abs = std::min(abs(lo), abs(hi));
    QComplex c(a.center.re / mid, a.center.im / mid);
    mpq_class r = a.radius / min_abs +
                  a.center_modulus_ub() * (hi - lo) / (2 * min_abs * min_abs);
    return {c, r};
}

Ball qball_to_ball(const QBall& a, long n) {
    GInt v = round_to_scale_q(a.center, n);
    Dyadic r = dyadic_ub_of_q(a.radius) + Dyadic(3, n + 2);
    return Ball(v.at_scale(n), r);
}

} // namespace l2x
