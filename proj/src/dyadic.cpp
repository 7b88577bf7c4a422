#include "l2x/dyadic.hpp"

#include "l2x/errors.hpp"

namespace l2x {

namespace budget {

namespace {
std::atomic<std::int64_t> g_max_terms{std::int64_t(1) << 24};
}

std::int64_t max_terms() { return g_max_terms.load(std::memory_order_relaxed); }

void set_max_terms(std::int64_t v) {
    if (v < 1) throw ValidationError("budget must be positive");
    g_max_terms.store(v, std::memory_order_relaxed);
}

void charge(std::int64_t required) {
    const std::int64_t lim = max_terms();
    if (required < 0 || required > lim) throw BudgetExceeded(required, lim);
}

} // namespace budget

std::size_t bitlen(const mpz_class& v) {
    if (v == 0) return 0;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

long clog2(const mpz_class& v) {
    if (v <= 1) return 0;
    std::size_t b = bitlen(v);
    mpz_class p = mpz_class(1) << (b - 1);
    return (p == v) ? long(b - 1) : long(b);
}

long clog2_q(const mpq_class& v) {
    if (v <= 1) return 0;
    // smallest g with 2^g >= v
    mpz_class c = mpz_class(v.get_num() / v.get_den()); // floor
    long g = clog2(c);
    while (q_pow2(g) < v) ++g;
    return g;
}

mpz_class round_shift_half_even(const mpz_class& v, unsigned long shift) {
    if (shift == 0) return v;
    mpz_class q, r;
    mpz_fdiv_q_2exp(q.get_mpz_t(), v.get_mpz_t(), shift);
    mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), shift);
    mpz_class half = mpz_class(1) << (shift - 1);
    int c = cmp(r, half);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t())))
        q += 1;
    return q;
}

mpz_class round_q_half_even(const mpq_class& v) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    mpz_class twice = 2 * r;
    int c = cmp(twice, mpz_class(v.get_den()));
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t())))
        q += 1;
    return q;
}

mpz_class isqrt_floor(const mpz_class& v) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

mpz_class isqrt_ceil(const mpz_class& v) {
    mpz_class r = isqrt_floor(v);
    if (r * r < v) r += 1;
    return r;
}

mpq_class q_sqrt_ub(const mpq_class& q, unsigned prec) {
    if (q < 0) throw std::domain_error("q_sqrt_ub of negative value");
    if (q == 0) return 0;
    // ceil(q * 4^prec), then ceil sqrt: result^2 >= q.
    mpz_class num = q.get_num() << (2 * prec);
    mpz_class scaled_q, rem;
    mpz_cdiv_q(scaled_q.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
    mpz_class root = isqrt_ceil(scaled_q);
    mpq_class out(root, mpz_class(1) << prec);
    out.canonicalize();
    return out;
}

mpq_class q_sqrt_lb(const mpq_class& q, unsigned prec) {
    if (q <= 0) return 0;
    mpz_class num = q.get_num() << (2 * prec);
    mpz_class scaled_q;
    mpz_fdiv_q(scaled_q.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
    mpz_class root = isqrt_floor(scaled_q);
    mpq_class out(root, mpz_class(1) << prec);
    out.canonicalize();
    return out;
}

mpq_class q_pow2(long e) {
    mpq_class q;
    if (e >= 0)
        q = mpq_class(mpz_class(1) << e, 1);
    else
        q = mpq_class(1, mpz_class(1) << (-e));
    q.canonicalize();
    return q;
}

// --- Dyadic ---------------------------------------------------------------

void Dyadic::canonicalize() {
    if (man_ == 0) {
        sc_ = 0;
        return;
    }
    unsigned long tz = mpz_scan1(man_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_fdiv_q_2exp(man_.get_mpz_t(), man_.get_mpz_t(), tz);
        sc_ -= long(tz);
    }
}

Dyadic Dyadic::from_mpq(const mpq_class& q) {
    const mpz_class& den = q.get_den();
    if (den == 1) return Dyadic(q.get_num(), 0);
    // canonical mpq => den > 0; dyadic iff den is a power of two
    std::size_t b = bitlen(den);
    if ((mpz_class(1) << (b - 1)) != den)
        throw ValidationError("rational is not a dyadic: denominator " + den.get_str());
    return Dyadic(q.get_num(), long(b - 1));
}

mpq_class Dyadic::to_mpq() const {
    mpq_class q;
    if (sc_ >= 0)
        q = mpq_class(man_, mpz_class(1) << sc_);
    else
        q = mpq_class(man_ << (-sc_), 1);
    q.canonicalize();
    return q;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.man_ == 0) return b;
    if (b.man_ == 0) return a;
    long s = std::max(a.sc_, b.sc_);
    mpz_class m = (a.man_ << (unsigned long)(s - a.sc_)) + (b.man_ << (unsigned long)(s - b.sc_));
    return Dyadic(m, s);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.man_ == 0 || b.man_ == 0) return Dyadic();
    return Dyadic(a.man_ * b.man_, a.sc_ + b.sc_, Dyadic::already_canonical{});
}

int compare(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (a.man_ == 0) return 0;
    long s = std::max(a.sc_, b.sc_);
    mpz_class ma = a.man_ << (unsigned long)(s - a.sc_);
    mpz_class mb = b.man_ << (unsigned long)(s - b.sc_);
    return cmp(ma, mb);
}

Dyadic Dyadic::round_up_bits(unsigned bits) const {
    if (man_ == 0) return *this;
    std::size_t b = bitlen(man_);
    if (b <= bits) return *this;
    unsigned long sh = b - bits;
    mpz_class q;
    mpz_cdiv_q_2exp(q.get_mpz_t(), man_.get_mpz_t(), sh); // ceil: never decreases value
    return Dyadic(q, sc_ - long(sh));
}

Dyadic Dyadic::round_down_bits(unsigned bits) const {
    if (man_ == 0) return *this;
    std::size_t b = bitlen(man_);
    if (b <= bits) return *this;
    unsigned long sh = b - bits;
    mpz_class q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), man_.get_mpz_t(), sh);
    return Dyadic(q, sc_ - long(sh));
}

std::string Dyadic::str() const {
    return man_.get_str() + "*2^" + std::to_string(-sc_);
}

// --- rounding --------------------------------------------------------------

namespace {
mpz_class round_component(const Dyadic& d, long n) {
    // d.man * 2^(n - d.sc), rounded half-to-even when n < d.sc
    if (d.is_zero()) return 0;
    long e = n - d.scale();
    if (e >= 0) return d.mantissa() << (unsigned long)e;
    return round_shift_half_even(d.mantissa(), (unsigned long)(-e));
}
} // namespace

GInt round_to_scale(const GaussianDyadic& x, long n) {
    if (n < 0) throw std::domain_error("round_to_scale: n must be >= 0");
    return {round_component(x.re, n), round_component(x.im, n)};
}

mpz_class round_to_scale_q1(const mpq_class& x, long n) {
    if (n < 0) throw std::domain_error("round_to_scale_q: n must be >= 0");
    mpq_class scaled = x * q_pow2(n);
    return round_q_half_even(scaled);
}

GInt round_to_scale_q(const QComplex& x, long n) {
    return {round_to_scale_q1(x.re, n), round_to_scale_q1(x.im, n)};
}

} // namespace l2x
