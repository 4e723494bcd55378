#include "zetacrit/mpsf.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

namespace zetacrit::mpsf {

namespace {

// ---------------------------------------------------------------- Bernoulli

std::shared_mutex g_bern_mx;
std::vector<mpq_class> g_bern; // B_n with B_1 already flipped to -1/2

void bern_extend(unsigned long n) {
    // Akiyama-Tanigawa triangle, recomputed from scratch when the cache grows.
    std::vector<mpq_class> a(n + 1), out(n + 1);
    for (unsigned long m = 0; m <= n; ++m) {
        a[m] = mpq_class(1, m + 1);
        for (unsigned long j = m; j >= 1; --j)
            a[j - 1] = static_cast<long>(j) * (a[j - 1] - a[j]);
        out[m] = a[0];
    }
    if (n >= 1) out[1] = mpq_class(-1, 2);
    g_bern = std::move(out);
}

// ---------------------------------------------------- Borwein d coefficients

std::shared_mutex g_dcache_mx;
std::map<long, std::shared_ptr<const std::vector<mpq_class>>> g_dcache;

std::shared_ptr<const std::vector<mpq_class>> borwein_d(long n) {
    {
        std::shared_lock lk(g_dcache_mx);
        auto it = g_dcache.find(n);
        if (it != g_dcache.end()) return it->second;
    }
    auto v = std::make_shared<std::vector<mpq_class>>(n + 1);
    mpq_class term = 1, acc = 1; // scaled so d_0 = 1
    (*v)[0] = 1;
    for (long j = 0; j < n; ++j) {
        mpq_class f(mpz_class(4) * (n + j) * (n - j),
                    mpz_class(2 * j + 1) * (2 * j + 2));
        f.canonicalize();
        term *= f;
        acc += term;
        (*v)[j + 1] = acc;
    }
    std::unique_lock lk(g_dcache_mx);
    auto [it, inserted] = g_dcache.emplace(n, std::move(v));
    return it->second;
}

long borwein_n(long work_bits, double im_abs) {
    double num = static_cast<double>(work_bits) * M_LN2 + im_abs * M_PI / 2 +
                 std::log(2.0 + 2.0 * im_abs) + 10.0;
    return static_cast<long>(std::ceil(num / std::log(3.0 + std::sqrt(8.0)))) + 2;
}

void sincos_pair(const Real& x, Real& s, Real& c) {
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
}

struct BorweinSum {
    BigComplex val;
    long lost_bits = 0;
};

// Accelerated alternating sum; prime = termwise d/ds factor -log(k+1).
BorweinSum borwein_sum(const BigComplex& s, long wp, bool prime) {
    long n = borwein_n(wp, std::fabs(s.im.to_double()));
    auto d = borwein_d(n);
    Real dn((*d)[n], wp);
    BigComplex acc(wp);
    long max_exp = -(1L << 40);
    Real sk(wp), ck(wp);
    for (long k = 0; k < n; ++k) {
        Real L = log(Real(k + 1, wp));
        Real mag = exp(-(s.re * L));
        sincos_pair(-(s.im * L), sk, ck);
        Real w = Real(mpq_class((*d)[k] - (*d)[n]), wp) / dn; // in (-1, 0]
        if (prime) w = w * (-L);
        BigComplex term{w * mag * ck, w * mag * sk};
        max_exp = std::max(max_exp,
                           std::max(term.re.exponent(), term.im.exponent()));
        if (k % 2 == 0)
            acc = acc + term;
        else
            acc = acc - term;
    }
    BorweinSum r{-acc, 0};
    long res_exp = std::max(r.val.re.exponent(), r.val.im.exponent());
    if (r.val.is_zero())
        r.lost_bits = wp;
    else
        r.lost_bits = std::max(0L, max_exp - res_exp);
    return r;
}

// ------------------------------------------------------------ Spouge tables

long spouge_a(long result_bits) {
    return static_cast<long>(
               std::ceil(static_cast<double>(result_bits) * M_LN2 /
                         std::log(2.0 * M_PI))) +
           3;
}

std::shared_mutex g_spouge_mx;
std::map<std::pair<long, long>, std::shared_ptr<const std::vector<Real>>> g_spouge;

std::shared_ptr<const std::vector<Real>> spouge_coeffs(long a, long wp) {
    auto key = std::make_pair(a, wp);
    {
        std::shared_lock lk(g_spouge_mx);
        auto it = g_spouge.find(key);
        if (it != g_spouge.end()) return it->second;
    }
    auto v = std::make_shared<std::vector<Real>>();
    v->reserve(a);
    v->push_back(sqrt(2 * const_pi(wp)));
    mpz_class fact = 1;
    for (long k = 1; k < a; ++k) {
        if (k >= 2) fact *= (k - 1);
        // (a-k)^{k-1/2} e^{a-k} / (k-1)!, alternating sign
        Real e = (Real(2 * k - 1, wp) / 2) * log(Real(a - k, wp)) + Real(a - k, wp);
        Real c = exp(e) / Real(fact, wp);
        v->push_back(k % 2 == 1 ? c : -c);
    }
    std::unique_lock lk(g_spouge_mx);
    auto [it, inserted] = g_spouge.emplace(key, std::move(v));
    return it->second;
}

BigComplex spouge_core(const BigComplex& z, long a, long wp,
                       const std::vector<Real>& c) {
    BigComplex zz = z - 1;
    BigComplex S(wp);
    S.re = c[0];
    for (long k = 1; k < a; ++k) S = S + BigComplex(c[k]) / (zz + k);
    BigComplex za = zz + a;
    BigComplex e = (zz + BigComplex(Real(mpq_class(1, 2), wp))) * clog(za) - za;
    return cexp(e) * S;
}

BigComplex spouge_digamma_core(const BigComplex& z, long a, long wp,
                               const std::vector<Real>& c) {
    BigComplex zz = z - 1;
    BigComplex S(wp), Sp(wp);
    S.re = c[0];
    for (long k = 1; k < a; ++k) {
        BigComplex den = zz + k;
        S = S + BigComplex(c[k]) / den;
        Sp = Sp - BigComplex(c[k]) / (den * den);
    }
    BigComplex za = zz + a;
    BigComplex half(Real(mpq_class(1, 2), wp));
    return clog(za) + (zz + half) / za - 1 + Sp / S;
}

bool real_nonpositive_integer(const BigComplex& z) {
    return z.im.is_zero() && z.re.is_integer() && z.re.sgn() <= 0;
}

// ----------------------------------------------------- eta / eta' internals

bool real_negative_even_integer(const BigComplex& s) {
    if (!(s.im.is_zero() && s.re.is_integer()) || s.re.sgn() >= 0) return false;
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), s.re.raw(), MPFR_RNDN);
    return z <= -2 && mpz_even_p(z.get_mpz_t());
}

// eta(s) on Re s <= -1/2 through eta(s) = G(s) eta(1-s).
BigComplex eta_fe(const BigComplex& s, long wp) {
    BigComplex w = 1 - s;
    BigComplex ew = borwein_sum(w, wp, false).val;
    BigComplex gam = detail::gamma_at(w, wp);
    Real ln2 = const_log2(wp);
    Real pi = const_pi(wp);
    BigComplex c1 = cexp((1 - s) * ln2);
    BigComplex c2 = cexp(s * ln2);
    BigComplex sig = csin(s * (pi / 2));
    BigComplex G = (1 - c1) * c2 * rpow(pi, s - 1) * sig * gam / (1 - c2);
    return G * ew;
}

BigComplex eta_prime_fe(const BigComplex& s, long wp) {
    BigComplex w = 1 - s;
    BigComplex ew = borwein_sum(w, wp, false).val;
    BigComplex epw = borwein_sum(w, wp, true).val;
    BigComplex gam = detail::gamma_at(w, wp);
    BigComplex psi = detail::digamma_at(w, wp);
    Real ln2 = const_log2(wp);
    Real pi = const_pi(wp);
    Real lnpi = log(pi);
    BigComplex c1 = cexp((1 - s) * ln2);
    BigComplex c2 = cexp(s * ln2);
    BigComplex C = c2 * rpow(pi, s - 1) * gam / (1 - c2);
    BigComplex B = (1 - c1) * C;
    // B*dlog(B), grouped so the sin-zero factor never divides anything
    BigComplex BdB =
        C * (ln2 * c1 +
             (1 - c1) * (BigComplex(ln2 + lnpi) - psi + ln2 * c2 / (1 - c2)));
    BigComplex sig(wp), kap(wp);
    {
        BigComplex half_pi_s = s * (pi / 2);
        sig = csin(half_pi_s);
        kap = ccos(half_pi_s);
    }
    return ew * (BdB * sig + (pi / 2) * (B * kap)) - (B * sig) * epw;
}

} // namespace

// ------------------------------------------------------------- public: exact

mpq_class bernoulli(unsigned long n) {
    {
        std::shared_lock lk(g_bern_mx);
        if (n < g_bern.size()) return g_bern[n];
    }
    std::unique_lock lk(g_bern_mx);
    if (n >= g_bern.size()) bern_extend(n + 16);
    return g_bern[n];
}

mpq_class eta_neg_odd(unsigned long m) {
    mpz_class p = (mpz_class(1) << (2 * (m + 1))) - 1; // 4^{1+m} - 1
    mpq_class r = bernoulli(2 * m + 2) * mpq_class(p, 2 * m + 2);
    r.canonicalize();
    return r;
}

// -------------------------------------------------------------- public: eta

namespace detail {

bool is_real_integer(const BigComplex& s) {
    return s.im.is_zero() && s.re.is_integer();
}

BigComplex one_minus_two_pow(const BigComplex& e, long wp) {
    Real ln2 = const_log2(wp);
    Real xr = e.re * ln2, xi = e.im * ln2;
    Real si(wp), ci(wp);
    sincos_pair(xi, si, ci);
    Real sh = sin(xi / 2);
    return {2 * (sh * sh) - expm1(xr) * ci, -(exp(xr) * si)};
}

BigComplex eta_at(const BigComplex& s, long wp) {
    if (real_negative_even_integer(s)) return BigComplex(wp);
    if (s.re > Real(-1, 64) / 2) return borwein_sum(s, wp, false).val;
    return eta_fe(s, wp);
}

BigComplex eta_prime_at(const BigComplex& s, long wp) {
    if (s.re > Real(-1, 64) / 2) return borwein_sum(s, wp, true).val;
    return eta_prime_fe(s, wp);
}

BigComplex gamma_at(const BigComplex& z, long result_bits) {
    if (real_nonpositive_integer(z))
        throw PoleAtNonpositiveInteger("gamma at " + z.re.str(8));
    long a = spouge_a(result_bits);
    long wp = result_bits + 2 * a + 16;
    auto c = spouge_coeffs(a, wp);
    BigComplex zw = {round_to(z.re, wp), round_to(z.im, wp)};
    if (zw.re >= Real(mpq_class(1, 2), 64))
        return spouge_core(zw, a, wp, *c);
    BigComplex pi_c(const_pi(wp));
    return pi_c / (csin(pi_c * zw) * spouge_core(1 - zw, a, wp, *c));
}

BigComplex digamma_at(const BigComplex& z, long result_bits) {
    if (real_nonpositive_integer(z))
        throw PoleAtNonpositiveInteger("digamma at " + z.re.str(8));
    long a = spouge_a(result_bits);
    long wp = result_bits + 2 * a + 16;
    auto c = spouge_coeffs(a, wp);
    BigComplex zw = {round_to(z.re, wp), round_to(z.im, wp)};
    if (zw.re >= Real(mpq_class(1, 2), 64))
        return spouge_digamma_core(zw, a, wp, *c);
    Real pi = const_pi(wp);
    return spouge_digamma_core(1 - zw, a, wp, *c) - pi * ccot(BigComplex(pi) * zw);
}

} // namespace detail

BigComplex eta(const BigComplex& s, const PrecisionContext& ctx) {
    if (real_negative_even_integer(s)) return BigComplex(ctx.bits);
    bool left = s.re <= Real(-1, 64) / 2;
    long wp = ctx.work_bits();
    for (int attempt = 0;; ++attempt) {
        long lost = 0;
        BigComplex r(wp);
        if (left) {
            r = eta_fe(s, wp);
            // multiplicative assembly, no cancelling sum
        } else {
            BorweinSum b = borwein_sum(s, wp, false);
            r = b.val;
            lost = b.lost_bits;
        }
        // Deliver only when the surviving mantissa covers the target. Near a
        // zero of eta the cancellation is genuine (the value is small), so a
        // retry at doubled precision recovers it; at an exact zero the loss
        // scales with wp and the escalation budget runs out instead.
        if (wp - lost >= ctx.bits + 8) return round_to(r, ctx.bits);
        if (attempt >= ctx.max_escalations)
            throw PrecisionEscalationExhausted(
                "eta: " + std::to_string(lost) + " bits cancelled at " +
                std::to_string(wp) + " working bits");
        wp *= 2;
    }
}

BigComplex zeta(const BigComplex& s, const PrecisionContext& ctx) {
    if (detail::is_real_integer(s) && s.re == 1) throw PoleAtOne("zeta at s = 1");
    long wp = ctx.work_bits();
    BigComplex den = detail::one_minus_two_pow(1 - s, wp);
    Real thr = ldexp(1 + abs(cexp((1 - s) * const_log2(wp))), -(ctx.bits - 8));
    if (abs(den) <= thr) {
        BigComplex d1 = s - 1;
        if (abs(d1) < Real(mpq_class(1, 10), 64)) throw PoleAtOne("zeta near s = 1");
        throw EtaFactorZero("zeta: 1-2^{1-s} vanishes (s on 1 + 2*pi*i*k/log 2)");
    }
    return round_to(eta(s, ctx) / den, ctx.bits);
}

BigComplex gamma_fn(const BigComplex& z, const PrecisionContext& ctx) {
    return round_to(detail::gamma_at(z, ctx.bits + 8), ctx.bits);
}

BigComplex digamma(const BigComplex& z, const PrecisionContext& ctx) {
    return round_to(detail::digamma_at(z, ctx.bits + 8), ctx.bits);
}

BigComplex eta_prime(const BigComplex& s, const PrecisionContext& ctx) {
    bool left = s.re <= Real(-1, 64) / 2;
    long wp = ctx.work_bits();
    for (int attempt = 0;; ++attempt) {
        long lost = 0;
        BigComplex r(wp);
        if (left) {
            r = eta_prime_fe(s, wp);
        } else {
            BorweinSum b = borwein_sum(s, wp, true);
            r = b.val;
            lost = b.lost_bits;
        }
        if (wp - lost >= ctx.bits + 8) return round_to(r, ctx.bits);
        if (attempt >= ctx.max_escalations)
            throw PrecisionEscalationExhausted(
                "eta_prime: " + std::to_string(lost) + " bits cancelled at " +
                std::to_string(wp) + " working bits");
        wp *= 2;
    }
}

// --------------------------------------------------------- lattice evaluation

namespace {

struct LatticePlan {
    long j0;          // first functional-equation index
    bool s_is_int;
    bool s_even;
    mpz_class s_int;
};

LatticePlan lattice_plan(const BigComplex& s, long count) {
    LatticePlan p{};
    double re_d = s.re.to_double();
    long j0 = static_cast<long>(std::ceil((re_d + 0.5) / 2.0));
    p.j0 = std::max(0L, std::min(j0, count));
    p.s_is_int = detail::is_real_integer(s);
    if (p.s_is_int) {
        mpfr_get_z(p.s_int.get_mpz_t(), s.re.raw(), MPFR_RNDN);
        p.s_even = mpz_even_p(p.s_int.get_mpz_t()) != 0;
    }
    return p;
}

bool lattice_trivial_zero(const LatticePlan& p, long j) {
    return p.s_is_int && p.s_even && p.s_int - 2 * j <= -2;
}

} // namespace

std::vector<BigComplex> eta_lattice(const BigComplex& s, long count,
                                    const PrecisionContext& ctx, long work_bits) {
    long wp = work_bits > 0 ? work_bits : ctx.work_bits();
    std::vector<BigComplex> out(count, BigComplex(wp));
    if (count == 0) return out;
    LatticePlan plan = lattice_plan(s, count);

    for (long j = 0; j < plan.j0; ++j)
        if (!lattice_trivial_zero(plan, j)) out[j] = detail::eta_at(s - 2 * j, wp);
    if (plan.j0 >= count) return out;

    // Shared-base accelerated sums for eta(1 - s + 2j), j = j0..count-1.
    long n = borwein_n(wp, std::fabs(s.im.to_double()));
    auto d = borwein_d(n);
    Real dn((*d)[n], wp);
    std::vector<BigComplex> acc(count - plan.j0, BigComplex(wp));
    Real sk(wp), ck(wp);
    for (long k = 0; k < n; ++k) {
        Real L = log(Real(k + 1, wp));
        Real mag = exp((s.re - 1) * L); // (k+1)^{Re s - 1}
        sincos_pair(s.im * L, sk, ck);
        Real w = Real(mpq_class((*d)[k] - (*d)[n]), wp) / dn;
        if (k % 2 == 1) w = -w;
        BigComplex cur{w * mag * ck, w * mag * sk}; // w * (k+1)^{s-1}
        if (plan.j0 > 0) {
            Real shift = pow(Real(k + 1, wp), -2 * plan.j0);
            cur = cur * shift;
        }
        Real qr = Real(1, wp) / Real((k + 1) * (k + 1), wp);
        for (long j = plan.j0; j < count; ++j) {
            acc[j - plan.j0] = acc[j - plan.j0] + cur;
            if (j + 1 < count) cur = cur * qr;
        }
    }

    // Functional-equation factors, updated incrementally in j.
    Real pi = const_pi(wp);
    Real ln2 = const_log2(wp);
    Real inv_pi2 = Real(1, wp) / (pi * pi);
    BigComplex c1 = cexp((1 - s + 2 * plan.j0) * ln2); // 2^{1-s+2j}
    BigComplex c2 = cexp((s - 2 * plan.j0) * ln2);     // 2^{s-2j}
    BigComplex pip = rpow(pi, s - (2 * plan.j0 + 1));  // pi^{s-2j-1}
    BigComplex sig = csin(s * (pi / 2));
    if (plan.j0 % 2 == 1) sig = -sig;
    BigComplex gam = detail::gamma_at(1 - s + 2 * plan.j0, wp);
    for (long j = plan.j0; j < count; ++j) {
        if (lattice_trivial_zero(plan, j)) {
            out[j] = BigComplex(wp);
        } else {
            BigComplex G = (1 - c1) * c2 * pip * sig * gam / (1 - c2);
            out[j] = G * (-acc[j - plan.j0]);
        }
        if (j + 1 < count) {
            BigComplex arg = 1 - s + 2 * j;
            gam = gam * (arg * (arg + 1));
            c1 = c1 * 4;
            c2 = c2 / 4;
            pip = pip * inv_pi2;
            sig = -sig;
        }
    }
    return out;
}

std::vector<BigComplex> eta_prime_lattice(const BigComplex& s, long count,
                                          const PrecisionContext& ctx,
                                          long work_bits) {
    long wp = work_bits > 0 ? work_bits : ctx.work_bits();
    std::vector<BigComplex> out(count, BigComplex(wp));
    if (count == 0) return out;
    LatticePlan plan = lattice_plan(s, count);

    for (long j = 0; j < plan.j0; ++j) out[j] = detail::eta_prime_at(s - 2 * j, wp);
    if (plan.j0 >= count) return out;

    long n = borwein_n(wp, std::fabs(s.im.to_double()));
    auto d = borwein_d(n);
    Real dn((*d)[n], wp);
    long m = count - plan.j0;
    std::vector<BigComplex> acc(m, BigComplex(wp)), accp(m, BigComplex(wp));
    Real sk(wp), ck(wp);
    for (long k = 0; k < n; ++k) {
        Real L = log(Real(k + 1, wp));
        Real mag = exp((s.re - 1) * L);
        sincos_pair(s.im * L, sk, ck);
        Real w = Real(mpq_class((*d)[k] - (*d)[n]), wp) / dn;
        if (k % 2 == 1) w = -w;
        BigComplex cur{w * mag * ck, w * mag * sk};
        if (plan.j0 > 0) cur = cur * pow(Real(k + 1, wp), -2 * plan.j0);
        Real qr = Real(1, wp) / Real((k + 1) * (k + 1), wp);
        for (long j = 0; j < m; ++j) {
            acc[j] = acc[j] + cur;
            accp[j] = accp[j] - cur * L;
            if (j + 1 < m) cur = cur * qr;
        }
    }

    Real pi = const_pi(wp);
    Real ln2 = const_log2(wp);
    Real lnpi = log(pi);
    Real inv_pi2 = Real(1, wp) / (pi * pi);
    BigComplex c1 = cexp((1 - s + 2 * plan.j0) * ln2);
    BigComplex c2 = cexp((s - 2 * plan.j0) * ln2);
    BigComplex pip = rpow(pi, s - (2 * plan.j0 + 1));
    BigComplex sig(wp), kap(wp);
    {
        BigComplex half_pi_s = s * (pi / 2);
        sig = csin(half_pi_s);
        kap = ccos(half_pi_s);
        if (plan.j0 % 2 == 1) {
            sig = -sig;
            kap = -kap;
        }
    }
    BigComplex gam = detail::gamma_at(1 - s + 2 * plan.j0, wp);
    BigComplex psi = detail::digamma_at(1 - s + 2 * plan.j0, wp);
    for (long j = plan.j0; j < count; ++j) {
        BigComplex ew = -acc[j - plan.j0];
        BigComplex epw = -accp[j - plan.j0];
        BigComplex C = c2 * pip * gam / (1 - c2);
        BigComplex B = (1 - c1) * C;
        BigComplex BdB =
            C * (ln2 * c1 +
                 (1 - c1) * (BigComplex(ln2 + lnpi) - psi + ln2 * c2 / (1 - c2)));
        out[j] = ew * (BdB * sig + (pi / 2) * (B * kap)) - (B * sig) * epw;
        if (j + 1 < count) {
            BigComplex arg = 1 - s + 2 * j;
            psi = psi + 1 / arg + 1 / (arg + 1);
            gam = gam * (arg * (arg + 1));
            c1 = c1 * 4;
            c2 = c2 / 4;
            pip = pip * inv_pi2;
            sig = -sig;
            kap = -kap;
        }
    }
    return out;
}

} // namespace zetacrit::mpsf
