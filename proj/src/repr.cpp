#include "l2x/repr.hpp"

#include "l2x/errors.hpp"
#include "l2x/kernel.hpp"

#include <map>
#include <mutex>

namespace l2x::repr {

namespace {

long long pow2_ll_checked(const mpz_class& e) {
    if (e < 0 || e > 62) throw BudgetExceeded(-1, budget::max_terms());
    long long v = 1LL << e.get_ui();
    return v;
}

} // namespace

long width_exponent_checked(const Poly& p, long n) {
    mpz_class e = p.eval(std::uint64_t(n));
    long long S = pow2_ll_checked(e);
    budget::charge(S);
    return long(e.get_si());
}

// --- FourierRep -------------------------------------------------------------

struct FourierRep::Impl {
    CoeffOracle oracle;
    TailBound tail;
    mpz_class coeff_bound;
    StepRefOracle step_ref;

    mutable std::mutex mu;
    mutable std::map<std::pair<long long, long>, GInt> memo;
};

FourierRep::FourierRep(CoeffOracle oracle, TailBound tail, mpz_class coeff_bound)
    : impl_(std::make_shared<Impl>()) {
    if (coeff_bound < 1) throw ValidationError("coeff_bound must be a positive integer");
    impl_->oracle = std::move(oracle);
    impl_->tail = std::move(tail);
    impl_->coeff_bound = std::move(coeff_bound);
}

GInt FourierRep::coeff(long long k, long n) const {
    if (n < 0) throw std::domain_error("coeff: n must be >= 0");
    std::pair<long long, long> key{k, n};
    {
        std::scoped_lock lk(impl_->mu);
        auto it = impl_->memo.find(key);
        if (it != impl_->memo.end()) return it->second;
    }
    GInt v = impl_->oracle(k, n);
    std::scoped_lock lk(impl_->mu);
    impl_->memo.emplace(key, v);
    return v;
}

const TailBound& FourierRep::tail() const { return impl_->tail; }
const mpz_class& FourierRep::coeff_bound() const { return impl_->coeff_bound; }

bool FourierRep::has_step_reference() const { return bool(impl_->step_ref); }

QBall FourierRep::step_reference(long long S, long long s, unsigned prec) const {
    if (!impl_->step_ref)
        throw UnsupportedRep("representation carries no closed-form step reference");
    return impl_->step_ref(S, s, prec);
}

void FourierRep::set_step_reference(StepRefOracle ref) { impl_->step_ref = std::move(ref); }

FourierRep FourierRep::constant(const QComplex& c) {
    return trig_polynomial({{0, c}});
}

FourierRep FourierRep::mode(long long k0) {
    return trig_polynomial({{k0, QComplex(1)}});
}

FourierRep FourierRep::trig_polynomial(std::vector<std::pair<long long, QComplex>> modes) {
    // Finite trigonometric polynomial: the truncation error vanishes for any
    // K >= max|k|, so the constant polynomial p(m) = clog2(max|k|) is a valid
    // tail bound and the finite cutoff is recorded exactly.
    long long deg = 0;
    mpq_class max_norm2 = 0;
    for (auto& [k, c] : modes) {
        deg = std::max(deg, std::llabs(k));
        max_norm2 = std::max(max_norm2, c.norm2());
    }
    TailBound tail(Poly::constant(std::uint64_t(clog2(mpz_class(std::max(deg, 1LL))))), deg);
    mpz_class bound = isqrt_ceil(mpz_class(mpq_class(max_norm2).get_num() /
                                           mpq_class(max_norm2).get_den()) +
                                 1);
    if (bound < 1) bound = 1;

    auto modes_ptr = std::make_shared<const std::vector<std::pair<long long, QComplex>>>(std::move(modes));
    CoeffOracle oracle = [modes_ptr](long long k, long n) -> GInt {
        QComplex c(0);
        for (auto& [km, cm] : *modes_ptr)
            if (km == k) c = c + cm;
        return round_to_scale_q(c, n);
    };
    FourierRep rep(std::move(oracle), std::move(tail), bound);
    rep.set_step_reference([modes_ptr](long long S, long long s, unsigned prec) -> QBall {
        // f^_{S,s} = sum_k coeff_k * e_{S,s,k}; the k = 0 kernel is exactly 1.
        QBall acc;
        for (auto& [km, cm] : *modes_ptr) {
            if (km == 0) {
                acc = qball_add(acc, QBall(cm));
            } else {
                GInt e = kernel::e_coeff(S, s, km, long(prec));
                QBall eb(QComplex(mpq_class(e.re) * q_pow2(-long(prec)),
                                  mpq_class(e.im) * q_pow2(-long(prec))),
                         q_pow2(-long(prec)));
                acc = qball_add(acc, qball_mul(eb, QBall(cm)));
            }
        }
        return acc;
    });
    return rep;
}

// --- StepRep ----------------------------------------------------------------

struct StepRep::Impl {
    AvgOracle oracle;
    RowOracle row;
    TailBound tail;

    mutable std::mutex mu;
    mutable std::map<std::pair<long long, std::pair<long long, long>>, GInt> memo;
};

StepRep::StepRep(AvgOracle oracle, TailBound tail)
    : StepRep(std::move(oracle), RowOracle{}, std::move(tail)) {}

StepRep::StepRep(AvgOracle oracle, RowOracle row, TailBound tail)
    : impl_(std::make_shared<Impl>()) {
    impl_->oracle = std::move(oracle);
    impl_->row = std::move(row);
    impl_->tail = std::move(tail);
}

GInt StepRep::avg(long long S, long long s, long n) const {
    if (S < 1) throw std::domain_error("avg: S must be >= 1");
    if (s < 0 || s >= S) throw std::domain_error("avg: s must lie in [0, S)");
    if (n < 0) throw std::domain_error("avg: n must be >= 0");
    auto key = std::make_pair(S, std::make_pair(s, n));
    {
        std::scoped_lock lk(impl_->mu);
        auto it = impl_->memo.find(key);
        if (it != impl_->memo.end()) return it->second;
    }
    GInt v = impl_->oracle(S, s, n);
    std::scoped_lock lk(impl_->mu);
    impl_->memo.emplace(key, v);
    return v;
}

std::vector<GInt> StepRep::page(long long S, long n) const {
    if (S < 1) throw std::domain_error("page: S must be >= 1");
    budget::charge(S);
    if (impl_->row) return impl_->row(S, n);
    std::vector<GInt> out;
    out.reserve(std::size_t(S));
    for (long long s = 0; s < S; ++s) out.push_back(impl_->oracle(S, s, n));
    return out;
}

const TailBound& StepRep::tail() const { return impl_->tail; }

StepRep StepRep::constant(const QComplex& c) {
    // constant function: every step average is c; steps reproduce it exactly,
    // so the zero polynomial is a valid tail bound.
    AvgOracle oracle = [c](long long, long long, long n) { return round_to_scale_q(c, n); };
    return StepRep(std::move(oracle), TailBound(Poly::constant(0), 0));
}

StepRep StepRep::mode(long long k0) {
    if (k0 == 0) return constant(QComplex(1));
    // f^_{S,s} = e_{S,s,k0}. Tail: ||f - S_S(f)||^2 = 1 - sinc^2(pi k0/S)
    // <= (pi k0 / S)^2 / 3 <= 4^-m for S = 2^{m + clog2|k0| + 2}.
    AvgOracle oracle = [k0](long long S, long long s, long n) {
        return kernel::e_coeff(S, s, k0, n);
    };
    RowOracle row = [k0](long long S, long n) {
        std::vector<GInt> out(std::size_t(S));
        kernel::e_row_foreach(S, k0, n, [&out](long long s, const GInt& v) { out[std::size_t(s)] = v; });
        return out;
    };
    Poly p({std::uint64_t(clog2(mpz_class(std::llabs(k0))) + 2), 1});
    return StepRep(std::move(oracle), std::move(row), TailBound(std::move(p)));
}

StepRep StepRep::ramp() {
    // f(t) = t: f^_{S,s} = (2s+1)/(2S) exactly. Per-step variance of a linear
    // function gives ||f - S_S(f)||^2 = 1/(12 S^2) <= 4^-m at S = 2^m.
    AvgOracle oracle = [](long long S, long long s, long n) {
        mpq_class v(2 * s + 1, 2 * S);
        v.canonicalize();
        return round_to_scale_q(QComplex(v, 0), n);
    };
    return StepRep(std::move(oracle), TailBound(Poly({0, 1})));
}

StepRep StepRep::table(long long S_tab, std::vector<QComplex> heights) {
    if (S_tab < 1 || std::size_t(S_tab) != heights.size())
        throw ValidationError("table step rep: S must match the number of heights");
    mpq_class max_norm2 = 0;
    for (auto& h : heights) max_norm2 = std::max(max_norm2, h.norm2());
    mpz_class hb = isqrt_ceil(mpz_class(max_norm2.get_num() / max_norm2.get_den()) + 1);

    auto hp = std::make_shared<const std::vector<QComplex>>(std::move(heights));
    AvgOracle oracle = [hp, S_tab](long long S, long long s, long n) {
        // exact average of the table step function over (s/S, (s+1)/S]
        mpq_class lo(s, S), hi(s + 1, S);
        lo.canonicalize();
        hi.canonicalize();
        QComplex acc;
        for (long long j = 0; j < S_tab; ++j) {
            mpq_class a(j, S_tab), b(j + 1, S_tab);
            a.canonicalize();
            b.canonicalize();
            mpq_class from = std::max(lo, a), to = std::min(hi, b);
            if (from < to) {
                mpq_class w = to - from;
                acc = acc + QComplex((*hp)[std::size_t(j)].re * w, (*hp)[std::size_t(j)].im * w);
            }
        }
        return round_to_scale_q(QComplex(acc.re * S, acc.im * S), n);
    };
    // A step function on S_tab cells differs from S_S(f) only on the <= S_tab
    // cells containing interior breakpoints, each off by at most (2H)^2/S.
    Poly p({std::uint64_t(clog2(mpz_class(S_tab)) + 2 * clog2(hb + 1) + 2), 2});
    return StepRep(std::move(oracle), TailBound(std::move(p)));
}

// --- MeanStepRep ------------------------------------------------------------

struct MeanStepRep::Impl {
    PageOracle page;
    Poly width_poly;
    TailBound tail;

    mutable std::mutex mu;
    mutable std::map<long, std::vector<GInt>> memo;
};

MeanStepRep::MeanStepRep(PageOracle page, Poly width_poly, TailBound tail)
    : impl_(std::make_shared<Impl>()) {
    impl_->page = std::move(page);
    impl_->width_poly = std::move(width_poly);
    impl_->tail = std::move(tail);
}

const std::vector<GInt>& MeanStepRep::page(long n) const {
    if (n < 0) throw std::domain_error("page: n must be >= 0");
    std::scoped_lock lk(impl_->mu);
    auto it = impl_->memo.find(n);
    if (it != impl_->memo.end()) return it->second;
    auto [pos, _] = impl_->memo.emplace(n, impl_->page(n));
    return pos->second;
}

long long MeanStepRep::width(long n) const {
    mpz_class e = impl_->width_poly.eval(std::uint64_t(n));
    long long S = pow2_ll_checked(e);
    budget::charge(S);
    return S;
}

const Poly& MeanStepRep::width_poly() const { return impl_->width_poly; }
const TailBound& MeanStepRep::tail() const { return impl_->tail; }

MeanStepRep MeanStepRep::from_step(const StepRep& st, Poly width_poly) {
    Poly wp = width_poly;
    PageOracle page = [st, wp](long n) {
        mpz_class e = wp.eval(std::uint64_t(n));
        return st.page(pow2_ll_checked(e), n);
    };
    return MeanStepRep(std::move(page), std::move(width_poly), st.tail());
}

// --- operations --------------------------------------------------------------

Ball coeff_ball(const FourierRep& f, long long k, long n) {
    GInt c = f.coeff(k, n);
    return Ball(c.at_scale(n), Dyadic::pow2(-n));
}

Ball partial_sum_eval(const FourierRep& f, long long K, const mpq_class& t, long n) {
    if (K < 0) throw std::domain_error("partial_sum_eval: K must be >= 0");
    budget::charge(2 * K + 1);
    // working precision covers the term count and the coefficient bound, so
    // the summed radius stays under 2^-n
    long m = n + clog2(mpz_class(2 * K + 1)) + clog2(f.coeff_bound() + 2) + 4;
    std::vector<Ball> terms;
    terms.reserve(std::size_t(2 * K + 1));
    for (long long k = -K; k <= K; ++k) {
        Ball c = coeff_ball(f, k, m);
        if (c.center.is_zero() && c.radius.is_zero()) continue;
        mpq_class arg = kernel::frac_mod1(mpq_class(k) * t);
        terms.push_back(ball_mul(c, kernel::exp2pi(arg, m)));
    }
    Ball out = ball_sum(terms);
    if (out.radius > Dyadic::pow2(-n))
        throw std::logic_error("partial_sum_eval: internal radius bound violated");
    return out;
}

Ball step_eval(const StepRep& st, long long S, const mpq_class& t, long n) {
    if (t < 0 || t >= 1) throw std::domain_error("step_eval: t must lie in [0,1)");
    mpq_class scaled = mpq_class(S) * t;
    mpz_class s_idx;
    mpz_fdiv_q(s_idx.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    GInt h = st.avg(S, s_idx.get_si(), n);
    return Ball(h.at_scale(n), Dyadic::pow2(-n));
}

mpq_class norm_upper_bound(const FourierRep& f) {
    // ||f||^2 = ||F_K0(f)||^2 + ||f - F_K0(f)||^2 <= sum + 1 by orthogonality,
    // with K0 = 2^{p(0)} from the tail bound at m = 0.
    mpz_class e = f.tail().poly.eval(0);
    long long K0 = pow2_ll_checked(e);
    if (f.tail().finite_cutoff && *f.tail().finite_cutoff < K0)
        K0 = std::max<long long>(*f.tail().finite_cutoff, 0);
    budget::charge(2 * K0 + 1);
    mpq_class sum = 1; // tail term
    for (long long k = -K0; k <= K0; ++k) {
        GInt c = f.coeff(k, 1);
        mpz_class n2 = c.re * c.re + c.im * c.im;
        // (|c|+1)^2 <= |c|^2 + 2 ceil|c| + 1, all over 2^2
        mpq_class term(n2 + 2 * isqrt_ceil(n2) + 1, 4);
        term.canonicalize();
        sum += term;
    }
    return q_sqrt_ub(sum, 32);
}

} // namespace l2x::repr
