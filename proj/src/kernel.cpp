#include "l2x/kernel.hpp"

#include "l2x/errors.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace l2x::kernel {

namespace {

unsigned bucket(unsigned prec) { return ((prec / 64) + 1) * 64; }

mpz_class mpq_floor(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

// atan(1/c) for integer c >= 2, bracketed to width <= target.
QInterval atan_inv(unsigned long c, const mpq_class& target) {
    mpq_class sum = 0;
    mpq_class c2 = mpq_class(1, c * c);
    c2.canonicalize();
    mpq_class pow = mpq_class(1, c); // (1/c)^(2j+1)
    pow.canonicalize();
    int sign = 1;
    unsigned long j = 0;
    mpq_class term;
    for (;;) {
        term = pow / (2 * j + 1);
        if (term <= target) break;
        sum += sign * term;
        sign = -sign;
        pow *= c2;
        ++j;
        if (j > 100000) throw std::logic_error("atan series failed to converge");
    }
    return {sum - term, sum + term};
}

struct ConstCache {
    std::mutex mu;
    std::map<unsigned, QInterval> by_bucket;

    QInterval get(unsigned prec, const std::function<QInterval(unsigned)>& compute) {
        unsigned b = bucket(prec);
        std::scoped_lock lk(mu);
        auto it = by_bucket.find(b);
        if (it != by_bucket.end()) return it->second;
        QInterval v = compute(b);
        by_bucket.emplace(b, v);
        return v;
    }
};

ConstCache g_pi_cache;
ConstCache g_ln2_cache;
ConstCache g_sqrt2_cache;

QInterval compute_pi(unsigned b) {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    mpq_class target = q_pow2(-long(b) - 8);
    QInterval a5 = atan_inv(5, target);
    QInterval a239 = atan_inv(239, target);
    return {16 * a5.lo - 4 * a239.hi, 16 * a5.hi - 4 * a239.lo};
}

QInterval compute_ln2(unsigned b) {
    // ln 2 = sum_{j>=1} 1/(j*2^j); tail after J terms < 2^-J/(J+1)
    unsigned long J = b + 8;
    mpq_class sum = 0;
    mpq_class pow(1, 2);
    for (unsigned long j = 1; j <= J; ++j) {
        sum += pow / long(j);
        pow /= 2;
    }
    mpq_class tail = q_pow2(-long(J)) / long(J + 1);
    return {sum, sum + tail};
}

QInterval compute_sqrt2(unsigned b) {
    mpz_class lo = isqrt_floor(mpz_class(2) << (2 * b));
    mpq_class l(lo, mpz_class(1) << b), h(lo + 1, mpz_class(1) << b);
    l.canonicalize();
    h.canonicalize();
    return {l, h};
}

} // namespace

QInterval pi_interval(unsigned prec) { return g_pi_cache.get(prec, compute_pi); }
QInterval ln2_interval(unsigned prec) { return g_ln2_cache.get(prec, compute_ln2); }
QInterval sqrt2_interval(unsigned prec) { return g_sqrt2_cache.get(prec, compute_sqrt2); }

QInterval ln_interval(const mpq_class& x, unsigned prec) {
    if (x <= 0) throw std::domain_error("ln_interval: argument must be positive");
    if (x == 1) return {0, 0};
    if (x < 1) {
        QInterval r = ln_interval(1 / x, prec);
        return {-r.hi, -r.lo};
    }
    unsigned b = bucket(prec);
    // x = 2^e * y with y in [1, 2)
    long e = 0;
    mpq_class y = x;
    while (y >= 2) {
        y /= 2;
        ++e;
    }
    // ln y = 2 atanh(z), z = (y-1)/(y+1) in [0, 1/3)
    mpq_class z = (y - 1) / (y + 1);
    mpq_class z2 = z * z;
    mpq_class sum = 0;
    mpq_class pow = z;
    mpq_class target = q_pow2(-long(b) - 4);
    unsigned long j = 0;
    for (;;) {
        sum += pow / long(2 * j + 1);
        pow *= z2;
        ++j;
        // remaining tail <= (9/8) * z^(2j+1)/(2j+1)
        mpq_class bound = mpq_class(9, 8) * pow / long(2 * j + 1);
        if (bound <= target) {
            sum *= 2;
            bound *= 2;
            QInterval l2 = ln2_interval(b);
            return {e * l2.lo + sum, e * l2.hi + sum + bound};
        }
        if (j > 100000) throw std::logic_error("ln series failed to converge");
    }
}

mpq_class frac_mod1(const mpq_class& q) {
    mpq_class f = q - mpq_class(mpq_floor(q));
    f.canonicalize();
    return f;
}

Ball exp2pi(const mpq_class& q, long n) {
    if (q < 0 || q >= 1) throw std::domain_error("exp2pi: argument must lie in [0,1)");
    if (n < 0) throw std::domain_error("exp2pi: n must be >= 0");
    const unsigned w = bucket(unsigned(n) + 16);

    // eighth-turn reduction: q = o/8 + q', q' in [0, 1/8)
    long o = mpq_floor(q * 8).get_si();
    mpq_class qr = q - mpq_class(o, 8);
    qr.canonicalize();

    // theta = 2*pi*q' in [0, pi/4]
    QInterval pi = pi_interval(w);
    mpq_class th_lo = 2 * qr * pi.lo;
    mpq_class th_hi = 2 * qr * pi.hi;

    Dyadic theta_m(round_to_scale_q1((th_lo + th_hi) / 2, w), w);
    mpq_class tm = theta_m.to_mpq();
    mpq_class halfw = std::max(th_hi - tm, tm - th_lo);

    // Taylor for cos + i sin at the dyadic midpoint; terms t^i/i! decrease
    // for i >= 1 since t < 1, and the total tail is < 5 * (first omitted term).
    mpq_class cos_sum = 0, sin_sum = 0;
    mpq_class term = 1; // t^i / i!
    mpq_class tail_target = q_pow2(-long(w) - 4);
    unsigned i = 0;
    for (;;) {
        if (i > 0 && term <= tail_target) break;
        int quadrant = int(i % 4);
        switch (quadrant) {
            case 0: cos_sum += term; break;
            case 1: sin_sum += term; break;
            case 2: cos_sum -= term; break;
            case 3: sin_sum -= term; break;
        }
        ++i;
        term = term * tm / long(i);
        if (i > 500) throw std::logic_error("exp2pi series failed to converge");
    }
    mpq_class remainder = 5 * term;
    mpq_class comp_err = remainder + halfw; // series tail + Lipschitz slack
    QBall z({cos_sum, sin_sum}, 2 * comp_err);

    // undo the reduction: multiply by exp(2*pi*i*o/8)
    int quarters = int(o / 2);
    bool odd = (o & 1) != 0;
    for (int t = 0; t < quarters; ++t) z = qball_mul_i(z);
    if (odd) {
        z = qball_scale(z, QComplex(mpq_class(1), mpq_class(1))); // *(1+i)
        QInterval s2 = sqrt2_interval(w);
        z = qball_div_real_interval(z, s2.lo, s2.hi);
    }

    long guard = 8 + clog2(mpz_class(i + 1));
    Ball out = qball_to_ball(z, n + guard);
    if (out.radius > Dyadic::pow2(-n))
        throw std::logic_error("exp2pi: internal radius bound violated");
    return out;
}

Ball exp_neg(const Dyadic& x, long n) {
    if (x.sign() < 0) throw std::domain_error("exp_neg: argument must be >= 0");
    if (n < 0) throw std::domain_error("exp_neg: n must be >= 0");
    if (x.is_zero()) return Ball::exact(1);

    // huge arguments: e^-x <= 2^-(n+1) once x >= (n+1)*ln2
    QInterval l2 = ln2_interval(32);
    if (x.to_mpq() >= (n + 1) * l2.hi)
        return Ball(GaussianDyadic(Dyadic::pow2(-n - 1), Dyadic()), Dyadic::pow2(-n - 1));

    // halve the argument down to y <= 1, square the enclosure back up
    long j = 0;
    if (x > Dyadic::one()) {
        const mpz_class& man = x.mantissa();
        long e = (man == 1) ? 0 : long(bitlen(man));
        j = std::max(0L, e - x.scale());
    }
    const unsigned w = bucket(unsigned(n + j) + 24);
    mpq_class y = x.mul_pow2(-j).to_mpq();

    mpq_class sum = 0;
    mpq_class term = 1; // y^i / i!
    mpq_class tail_target = q_pow2(-long(w) - 4);
    int sign = 1;
    unsigned i = 0;
    for (;;) {
        sum += sign * term;
        sign = -sign;
        ++i;
        term = term * y / long(i);
        if (i >= 2 && term <= tail_target) break;
        if (i > 500) throw std::logic_error("exp_neg series failed to converge");
    }
    mpq_class lo = sum - term, hi = sum + term;

    const mpq_class grid = q_pow2(-long(w) - 8);
    for (long t = 0; t < j; ++t) {
        if (lo < 0) lo = 0;
        lo = lo * lo;
        hi = hi * hi;
        // round outward to keep numerators small
        lo = mpq_class(mpq_floor(lo / grid)) * grid;
        hi = mpq_class(mpq_floor(hi / grid) + 1) * grid;
    }
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;

    QBall z({(lo + hi) / 2, mpq_class(0)}, (hi - lo) / 2);
    Ball out = qball_to_ball(z, n + 8);
    if (out.radius > Dyadic::pow2(-n))
        throw std::logic_error("exp_neg: internal radius bound violated");
    return out;
}

namespace {

struct EKey {
    long long S, s, k;
    long n;
    bool operator==(const EKey&) const = default;
};

struct EKeyHash {
    std::size_t operator()(const EKey& q) const {
        std::size_t h = std::hash<long long>()(q.S);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<long long>()(q.s));
        mix(std::hash<long long>()(q.k));
        mix(std::hash<long>()(q.n));
        return h;
    }
};

std::mutex g_e_mu;
std::unordered_map<EKey, GInt, EKeyHash> g_e_cache;

mpq_class frac_of_ratio(const mpz_class& p, long long S) {
    mpz_class m = p % S;
    if (m < 0) m += S;
    mpq_class q(m, mpz_class(S));
    q.canonicalize();
    return q;
}

void validate_query(long long S, long long s, long long k, long n) {
    (void)k;
    if (S < 1) throw std::domain_error("e_coeff: S must be >= 1");
    if (s < 0 || s >= S) throw std::domain_error("e_coeff: s must lie in [0, S)");
    if (n < 0) throw std::domain_error("e_coeff: n must be >= 0");
}

// (-i) * z
QBall qball_mul_minus_i(const QBall& z) {
    return {QComplex(z.center.im, -z.center.re), z.radius};
}

// divide an enclosure by the real constant 2*pi*k (k != 0), certified via a
// pi interval at precision `prec`.
QBall div_by_2pik(const QBall& z, long long k, unsigned prec) {
    QInterval pi = pi_interval(prec);
    mpq_class lo = 2 * mpz_class(k) * pi.lo;
    mpq_class hi = 2 * mpz_class(k) * pi.hi;
    if (k < 0) std::swap(lo, hi);
    return qball_div_real_interval(z, lo, hi);
}

} // namespace

GInt e_coeff(long long S, long long s, long long k, long n) {
    validate_query(S, s, k, n);
    if (k == 0) return GInt(mpz_class(1) << (unsigned long)n, 0);

    EKey key{S, s, k, n};
    {
        std::scoped_lock lk(g_e_mu);
        auto it = g_e_cache.find(key);
        if (it != g_e_cache.end()) return it->second;
    }

    const long mp = n + clog2(mpz_class(S)) + clog2(mpz_class(std::llabs(k))) + 4;
    mpq_class a1 = frac_of_ratio(mpz_class(k) * s, S);
    mpq_class a2 = frac_of_ratio(mpz_class(k) * (s + 1), S);
    QBall d = qball_sub(QBall::from_ball(exp2pi(a2, mp)), QBall::from_ball(exp2pi(a1, mp)));
    d = qball_scale(d, QComplex(mpq_class(S), mpq_class(0)));
    d = qball_mul_minus_i(d);
    d = div_by_2pik(d, k, unsigned(mp) + 8);

    GInt out = round_to_scale_q(d.center, n);
    // contract check: rounded output must stay within 2^-n of the true value
    mpq_class total = d.radius + q_sqrt_ub((d.center - QComplex::from_dyadic(out.at_scale(n))).norm2());
    if (total > q_pow2(-n))
        throw std::logic_error("e_coeff: internal radius bound violated");

    std::scoped_lock lk(g_e_mu);
    g_e_cache.emplace(key, out);
    return out;
}

GInt e_coeff(const KernelQuery& q) { return e_coeff(q.S, q.s, q.k, q.n); }

void e_row_foreach(long long S, long long k, long n,
                   const std::function<void(long long, const GInt&)>& fn) {
    validate_query(S, 0, k, n);
    budget::charge(S);
    if (k == 0) {
        GInt v(mpz_class(1) << (unsigned long)n, 0);
        for (long long s = 0; s < S; ++s) fn(s, v);
        return;
    }

    const long mb = n + 2 * clog2(mpz_class(S)) + 8;
    Ball omega = exp2pi(frac_of_ratio(mpz_class(k), S), mb);

    // rho = (-i) * S / (2 pi k)
    QBall rho(QComplex(mpq_class(0), mpq_class(-S)), 0);
    rho = div_by_2pik(rho, k, unsigned(mb) + 8);

    Ball z = Ball::exact(1); // exp(2 pi i k * 0 / S)
    const mpq_class tol = q_pow2(-n);
    for (long long s = 0; s < S; ++s) {
        Ball z_next = ball_mul_at(z, omega, mb);
        QBall e = qball_mul(QBall::from_ball(ball_sub(z_next, z)), rho);
        GInt out = round_to_scale_q(e.center, n);
        mpq_class total =
            e.radius + q_sqrt_ub((e.center - QComplex::from_dyadic(out.at_scale(n))).norm2());
        if (total > tol)
            throw std::logic_error("e_row: internal radius bound violated");
        fn(s, out);
        z = z_next;
    }
}

} // namespace l2x::kernel
