#include "zetacrit/quadid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "zetacrit/mpsf.hpp"
#include "zetacrit/polyx.hpp"

namespace zetacrit::quadid {

namespace {

// ------------------------------------------------------------- tolerances

struct ITols {
    Real abs; // absolute error target (may be exact zero: relative only)
    Real rel; // relative error target
};

ITols resolve_tols(const QuadratureSpec& spec, const PrecisionContext& ctx,
                   long wp) {
    ITols t{Real(wp), Real(wp)};
    if (spec.abs_tol > 0) mpfr_set_d(t.abs.raw(), spec.abs_tol, MPFR_RNDN);
    if (spec.rel_tol > 0)
        mpfr_set_d(t.rel.raw(), spec.rel_tol, MPFR_RNDN);
    else
        t.rel = pow2(-(ctx.bits + 8), wp);
    return t;
}

long levels_for(const QuadratureSpec& spec, long wp) {
    long l = spec.max_levels;
    long grow = 6;
    for (long b = wp; b > 64; b /= 2) ++grow;
    return std::max(l, grow);
}

// -------------------------------------------------- Gauss-Legendre rules

struct GLRule {
    std::vector<Real> x, w; // nodes and weights on [0,1]
};

std::shared_mutex g_gl_mx;
std::map<std::pair<long, long>, std::shared_ptr<const GLRule>> g_gl;

void legendre_pair(long n, const Real& z, Real& pn, Real& pnm1) {
    long wq = z.prec();
    Real p0(1, wq), p1 = z;
    for (long k = 2; k <= n; ++k) {
        Real pk = ((2 * k - 1) * (z * p1) - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(pk);
    }
    pn = std::move(p1);
    pnm1 = std::move(p0);
}

std::shared_ptr<const GLRule> gl_rule(long n, long prec) {
    auto key = std::make_pair(n, prec);
    {
        std::shared_lock lk(g_gl_mx);
        auto it = g_gl.find(key);
        if (it != g_gl.end()) return it->second;
    }
    long wq = prec + 32;
    auto rule = std::make_shared<GLRule>();
    rule->x.assign(n, Real(wq));
    rule->w.assign(n, Real(wq));
    Real pn(wq), pnm1(wq);
    for (long i = 1; i <= (n + 1) / 2; ++i) {
        Real z(wq);
        mpfr_set_d(z.raw(), std::cos(M_PI * (i - 0.25) / (n + 0.5)), MPFR_RNDN);
        Real dp(wq);
        for (int it = 0; it < 96; ++it) {
            legendre_pair(n, z, pn, pnm1);
            dp = n * (z * pn - pnm1) / (z * z - 1);
            Real dz = pn / dp;
            z = z - dz;
            if (dz.is_zero() || dz.exponent() < -(wq - 8)) break;
        }
        legendre_pair(n, z, pn, pnm1);
        dp = n * (z * pn - pnm1) / (z * z - 1);
        Real w = 2 / ((1 - z * z) * (dp * dp));
        rule->x[i - 1] = (1 + z) / 2;
        rule->w[i - 1] = w / 2;
        rule->x[n - i] = (1 - z) / 2;
        rule->w[n - i] = w / 2;
    }
    std::unique_lock lk(g_gl_mx);
    auto [it, ins] = g_gl.emplace(key, std::move(rule));
    return it->second;
}

BigComplex gl_panel(const Integrand& f, const Real& a, const Real& b,
                    const GLRule& r, long wp) {
    BigComplex acc(wp);
    Real width = b - a;
    for (size_t i = 0; i < r.x.size(); ++i) {
        Real xi = a + width * r.x[i];
        acc = acc + f(xi) * r.w[i];
    }
    return acc * width;
}

// One panel refined by bisection until the low/high rules agree.
struct PanelEnv {
    const Integrand& f;
    const GLRule& lo;
    const GLRule& hi;
    Real tol; // absolute, per leaf
    long max_depth;
    long wp;
    Real err; // accumulated estimate
    bool exhausted = false;
};

BigComplex panel_recurse(PanelEnv& env, const Real& a, const Real& b,
                         long depth) {
    BigComplex v1 = gl_panel(env.f, a, b, env.lo, env.wp);
    BigComplex v2 = gl_panel(env.f, a, b, env.hi, env.wp);
    Real d = abs(v2 - v1);
    if (d <= env.tol || depth >= env.max_depth) {
        env.err = env.err + d;
        if (d > env.tol) env.exhausted = true;
        return v2;
    }
    Real mid = (a + b) / 2;
    BigComplex left = panel_recurse(env, a, mid, depth + 1);
    return left + panel_recurse(env, mid, b, depth + 1);
}

// Integrate over [a, b] split into m equal adaptive panels.
BigComplex gl_run(const Integrand& f, const Real& a, const Real& b, long m,
                  const Real& leaf_tol, long max_depth, long wp, Real& err,
                  bool& exhausted) {
    auto lo = gl_rule(wp / 3 + 24, wp);
    auto hi = gl_rule(wp / 3 + 40, wp);
    PanelEnv env{f, *lo, *hi, leaf_tol, max_depth, wp, Real(wp)};
    BigComplex acc(wp);
    Real width = (b - a) / m;
    for (long i = 0; i < m; ++i) {
        Real pa = a + width * i;
        Real pb = (i == m - 1) ? b : a + width * (i + 1);
        acc = acc + panel_recurse(env, pa, pb, 0);
    }
    err = err + env.err;
    exhausted = exhausted || env.exhausted;
    return acc;
}

// ------------------------------------------------------------- tanh-sinh

// Map u -> x in (0,1) with x = (1 + tanh((pi/2) sinh u))/2, computed in a
// form that never rounds x to an exact endpoint.
struct TSNode {
    Real x, w;
};

TSNode ts_node_01(const Real& u, const Real& pi_half, long wp) {
    Real t = pi_half * sinh(u);
    TSNode n{Real(wp), Real(wp)};
    Real cu = cosh(u);
    if (t.sgn() <= 0) {
        Real e = exp(2 * t); // <= 1
        Real den = 1 + e;
        n.x = e / den;
        n.w = pi_half * cu * (2 * e) / (den * den);
    } else {
        Real e = exp(-2 * t);
        Real den = 1 + e;
        n.x = 1 / den;
        n.w = pi_half * cu * (2 * e) / (den * den);
    }
    return n;
}

// Same map for a generic interval (a,b) via the symmetric tanh form.
TSNode ts_node_ab(const Real& u, const Real& a, const Real& b,
                  const Real& pi_half, long wp) {
    TSNode n01 = ts_node_01(u, pi_half, wp);
    Real width = b - a;
    return {a + width * n01.x, width * n01.w};
}

// Level-doubling tanh-sinh driver over nodes u = k h. `g` returns the
// integrand already multiplied by the map weight. The node range extends
// dynamically: a strong integrable endpoint singularity keeps |g| relevant
// further out, so we walk until it stays negligible, under a hard cap.
BigComplex tanh_sinh_drive(const std::function<BigComplex(const Real&)>& g,
                           long wp, const ITols& tol, long max_levels,
                           Real& err, bool& exhausted) {
    double t_base = (static_cast<double>(wp) + 48) * M_LN2 / 2;
    double u_hard = std::asinh(80 * t_base / M_PI) + 0.5;

    BigComplex total(wp);
    Real prev_diff(wp);
    BigComplex prev(wp);
    Real h(mpq_class(1, 2), wp);
    Real gscale(wp); // running max |g|
    Real one(1, wp);
    bool have_prev = false;
    for (long level = 1;; ++level) {
        // new nodes: k = 0 (level 1 only) and odd k at this level
        BigComplex news(wp);
        if (level == 1) {
            BigComplex g0 = g(Real(0, wp));
            news = news + g0;
            gscale = max(gscale, abs(g0));
        }
        double hd = h.to_double();
        long kmax = static_cast<long>(std::ceil(u_hard / hd));
        long kstep = (level == 1) ? 1 : 2;
        long consec_small = 0;
        for (long k = 1; k <= kmax; k += kstep) {
            Real u = h * k;
            BigComplex gp = g(u);
            BigComplex gm = g(-u);
            news = news + gp + gm;
            Real m = max(abs(gp), abs(gm));
            gscale = max(gscale, m);
            if (m <= ldexp(max(one, gscale), -(wp + 24)) && k * hd > 2.0) {
                if (++consec_small >= 3) break;
            } else {
                consec_small = 0;
            }
        }
        if (level == 1) {
            total = news * h;
        } else {
            total = total / 2 + news * h;
        }
        if (have_prev) {
            Real diff = abs(total - prev);
            Real target =
                max(tol.abs, tol.rel * max(abs(total), ldexp(gscale, -8)));
            if (diff <= target) {
                err = diff;
                return total;
            }
            prev_diff = diff;
        }
        if (level >= max_levels) {
            err = prev_diff;
            exhausted = true;
            return total;
        }
        prev = total;
        have_prev = true;
        h = h / 2;
    }
}

// --------------------------------------------------- half-line assembly

struct RunResult {
    BigComplex value;
    Real err;
    bool exhausted = false;
};

// (0, 1]: tanh-sinh unless oscillation forces the log substitution.
RunResult run_01(const Integrand& f, const QuadratureSpec& spec,
                 const ITols& tol, long max_levels, long wp) {
    RunResult out{BigComplex(wp), Real(wp)};
    bool log_route =
        spec.osc >= 2.0 || spec.scheme == Scheme::AdaptivePanelLegendre;
    if (!log_route) {
        Real pi_half = const_pi(wp) / 2;
        auto g = [&](const Real& u) -> BigComplex {
            TSNode n = ts_node_01(u, pi_half, wp);
            return f(n.x) * n.w;
        };
        out.value = tanh_sinh_drive(g, wp, tol, max_levels, out.err,
                                    out.exhausted);
        return out;
    }
    // x = exp(-w): integral_0^inf f(exp(-w)) exp(-w) dw, linear phase in w.
    auto g = [&](const Real& w) -> BigComplex {
        Real x = exp(-w);
        return f(x) * x;
    };
    long m_sub = 1 + static_cast<long>(spec.osc / 3.0);
    Real leaf_tol = max(tol.abs / 64, pow2(-(wp - 16), wp));
    BigComplex acc(wp);
    Real scale(wp), last_mag(wp);
    long small_run = 0;
    Real a(0, wp);
    Real width(1, wp);
    for (long panel = 0; panel < 64 + max_levels; ++panel) {
        Real b = a + width;
        BigComplex v = gl_run(g, a, b, m_sub, leaf_tol, max_levels, wp,
                              out.err, out.exhausted);
        acc = acc + v;
        last_mag = abs(v);
        scale = max(scale, last_mag);
        Real thresh = max(tol.abs, tol.rel * max(abs(acc), scale)) / 8;
        if (last_mag <= thresh) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
        a = b;
        if (panel >= 1) width = width * 2;
    }
    if (small_run < 2) {
        out.exhausted = true;
        out.err = out.err + last_mag;
    }
    out.value = acc;
    return out;
}

// [1, inf): dyadic Gauss-Legendre panels; phase of x^{-i tau} advances by
// tau log2 per panel, so subdivision is proportional to osc.
RunResult run_1_inf(const Integrand& f, const QuadratureSpec& spec,
                    const ITols& tol, long max_levels, long wp) {
    RunResult out{BigComplex(wp), Real(wp)};
    long m_sub = 1 + static_cast<long>(spec.osc * M_LN2 / 3.0);
    Real leaf_tol = max(tol.abs / 64, pow2(-(wp - 16), wp));
    BigComplex acc(wp);
    Real scale(wp), last_mag(wp);
    long small_run = 0;
    Real a(1, wp);
    for (long panel = 0; panel < 64 + max_levels; ++panel) {
        Real b = a * 2;
        BigComplex v =
            gl_run(f, a, b, m_sub, leaf_tol, max_levels, wp, out.err,
                   out.exhausted);
        acc = acc + v;
        last_mag = abs(v);
        scale = max(scale, last_mag);
        Real thresh = max(tol.abs, tol.rel * max(abs(acc), scale)) / 8;
        if (last_mag <= thresh) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
        a = b;
    }
    if (small_run < 2) {
        out.exhausted = true;
        out.err = out.err + last_mag;
    }
    out.value = acc;
    return out;
}

QuadResult finish(const RunResult& r, const ITols& tol, long bits) {
    Real bound = max(tol.abs, tol.rel * abs(r.value));
    if (r.exhausted && r.err > bound)
        throw NonconvergenceAtMaxLevels(
            "quadrature: error estimate " + r.err.str(3) +
            " above target at the refinement cap");
    // the reported value is rounded to `bits`, so fold that into the estimate
    Real err_out = r.err + ldexp(abs(r.value), -bits);
    return {round_to(r.value, bits), round_to(err_out, bits)};
}

} // namespace

// ---------------------------------------------------------- public engine

QuadResult integrate_0_inf(const Integrand& f, const QuadratureSpec& spec,
                           const PrecisionContext& ctx) {
    spec.validate();
    long wp = ctx.work_bits();
    ITols tol = resolve_tols(spec, ctx, wp);
    long levels = levels_for(spec, wp);
    RunResult lo = run_01(f, spec, tol, levels, wp);
    RunResult hi = run_1_inf(f, spec, tol, levels, wp);
    RunResult sum{lo.value + hi.value, lo.err + hi.err,
                  lo.exhausted || hi.exhausted};
    return finish(sum, tol, ctx.bits);
}

QuadResult integrate_finite(const Integrand& f, const Real& a, const Real& b,
                            const QuadratureSpec& spec,
                            const PrecisionContext& ctx) {
    spec.validate();
    if (!(a < b)) throw UsageError("integrate_finite: requires a < b");
    long wp = ctx.work_bits();
    ITols tol = resolve_tols(spec, ctx, wp);
    long levels = levels_for(spec, wp);
    RunResult out{BigComplex(wp), Real(wp)};
    if (spec.scheme == Scheme::TanhSinh) {
        Real pi_half = const_pi(wp) / 2;
        Real aw = round_to(a, wp), bw = round_to(b, wp);
        auto g = [&](const Real& u) -> BigComplex {
            TSNode n = ts_node_ab(u, aw, bw, pi_half, wp);
            return f(n.x) * n.w;
        };
        out.value =
            tanh_sinh_drive(g, wp, tol, levels, out.err, out.exhausted);
    } else {
        long m_sub = 1 + static_cast<long>(spec.osc / 3.0);
        Real leaf_tol = max(tol.abs / 64, pow2(-(wp - 16), wp));
        out.value = gl_run(f, round_to(a, wp), round_to(b, wp), m_sub,
                           leaf_tol, levels, wp, out.err, out.exhausted);
    }
    return finish(out, tol, ctx.bits);
}

// ------------------------------------------------------------ identities

namespace {

// x coth x - 1, stable for small |x| via the even Bernoulli series.
Real xcothxm1(const Real& x, long wp) {
    Real ax = abs(x);
    if (ax >= Real(mpq_class(1, 4), 64)) return x * coth(x) - 1;
    Real x2 = x * x;
    Real term = x2 / 3; // n = 1 term: 4 B_2 x^2 / 2! = x^2/3
    Real acc = term;
    Real p = x2;
    mpz_class fact = 2;
    mpz_class pow4 = 4;
    for (long n = 2; n < 4096; ++n) {
        p = p * x2;
        pow4 *= 4;
        fact *= (2 * n - 1) * (2 * n);
        mpq_class q(pow4, fact);
        q.canonicalize();
        mpq_class c = mpsf::bernoulli(2 * n) * q;
        c.canonicalize();
        term = Real(c, wp) * p;
        acc = acc + term;
        if (term.is_zero() || term.exponent() < acc.exponent() - wp - 8) break;
    }
    return acc;
}

Real natural_floor(const Real& scale, long bits) {
    return ldexp(scale, -(bits - 16));
}

IdentityResidual make_residual(BigComplex lhs, BigComplex rhs,
                               const Real& natural, long bits) {
    Real m = max(abs(lhs), abs(rhs));
    Real scale = max(m, natural_floor(natural, bits));
    Real res = abs(lhs - rhs) / scale;
    return {round_to(lhs, bits), round_to(rhs, bits), round_to(scale, bits),
            round_to(res, bits)};
}

} // namespace

IdentityResidual identity_x_pow_sinh(const BigComplex& s,
                                     const PrecisionContext& ctx) {
    if (!(s.re < 0))
        throw UsageError("identity_x_pow_sinh: requires Re s < 0");
    long wp = ctx.work_bits();
    BigComplex sw = round_to(s, wp);
    BigComplex ms = -sw;
    QuadratureSpec spec;
    spec.osc = std::fabs(s.im.to_double());
    auto f = [&](const Real& x) -> BigComplex {
        return rpow(x, ms) / sinh(x);
    };
    BigComplex lhs = integrate_0_inf(f, spec, ctx).value;
    lhs = round_to(lhs, wp);

    Real pi = const_pi(wp);
    BigComplex sig = csin(sw * (pi / 2));
    BigComplex pis = rpow(pi, 1 - sw);
    BigComplex rhs(wp);
    bool trivial_zero = mpsf::detail::is_real_integer(sw) && sw.re.sgn() < 0 &&
                        mpsf::eta(sw, ctx).is_zero();
    if (trivial_zero) {
        // eta and sin share a simple zero: take the limit through eta'.
        BigComplex etap = mpsf::detail::eta_prime_at(sw, wp);
        BigComplex kap = ccos(sw * (pi / 2));
        rhs = -(pis * etap) / (kap * (pi / 2));
    } else {
        rhs = -(pis * mpsf::detail::eta_at(sw, wp)) / sig;
    }
    return make_residual(lhs, rhs, abs(pis), ctx.bits);
}

IdentityResidual identity_xcothx(const BigComplex& s,
                                 const PrecisionContext& ctx) {
    if (!(s.re < 2) || s.is_zero())
        throw UsageError("identity_xcothx: requires Re s < 2, s != 0");
    long wp = ctx.work_bits();
    BigComplex sw = round_to(s, wp);
    BigComplex ms = -sw;
    QuadratureSpec spec;
    spec.osc = std::fabs(s.im.to_double());
    // the integral can vanish (it does at zeros of eta): absolute floor at
    // the natural magnitude of the closed form
    Real pi = const_pi(wp);
    BigComplex pis = rpow(pi, 1 - sw);
    Real natural = abs(sw) * abs(pis);
    spec.abs_tol = 0;
    ITols tol{natural * pow2(-(ctx.bits + 8), wp), pow2(-(ctx.bits + 8), wp)};
    long levels = levels_for(spec, wp);
    auto f = [&](const Real& x) -> BigComplex {
        return (rpow(x, ms) * xcothxm1(x, wp)) / sinh(x);
    };
    RunResult lo = run_01(f, spec, tol, levels, wp);
    RunResult hi = run_1_inf(f, spec, tol, levels, wp);
    BigComplex integral = lo.value + hi.value;

    // at a real even integer both sin(pi s/2) and eta(s) are exactly zero:
    // keep the comparison exact instead of rounding pi
    BigComplex sig(wp);
    Real half_re = sw.re / 2;
    bool even_int = mpsf::detail::is_real_integer(sw) && half_re.is_integer();
    if (!even_int) sig = csin(sw * (pi / 2));
    BigComplex lhs = integral * sig;
    BigComplex rhs = sw * pis * mpsf::detail::eta_at(sw, wp);
    return make_residual(lhs, rhs, natural, ctx.bits);
}

IdentityResidual identity_sin2_contour(const Real& x,
                                       const PrecisionContext& ctx) {
    if (!(x > 0)) throw UsageError("identity_sin2_contour: requires x > 0");
    long wp = ctx.work_bits();
    Real xw = round_to(x, wp);
    Real pi = const_pi(wp);
    Real rate = xw / (2 * pi); // sin^2(rate * beta)
    QuadratureSpec spec;
    spec.osc = std::fabs(x.to_double()) / M_PI;
    // alpha = tanh(beta/2); d alpha = d beta / (2 cosh^2(beta/2)); integrand
    // is even in alpha, so twice the (0,1) part.
    auto f = [&](const Real& beta) -> BigComplex {
        Real al = tanh(beta / 2);
        Real ch = cosh(beta / 2);
        Real jac = 1 / (2 * (ch * ch));
        Real sh = sin(rate * beta);
        Real num = 4 * (sh * sh);
        return BigComplex((num * jac) / (al * al));
    };
    BigComplex lhs = integrate_0_inf(f, spec, ctx).value * 2;
    BigComplex rhs(4 * xcothxm1(xw, wp), Real(0, wp));
    return make_residual(lhs, rhs, abs(rhs) + 1, ctx.bits);
}

IdentityResidual identity_sin2_ml(long k, const Real& x,
                                  const PrecisionContext& ctx) {
    if (k < 1) throw UsageError("identity_sin2_ml: requires k >= 1");
    if (!(x > 0)) throw UsageError("identity_sin2_ml: requires x > 0");
    long wp = ctx.work_bits();
    Real xw = round_to(x, wp);
    Real pi = const_pi(wp);
    BigComplex y{Real(wp), xw / pi}; // ix/pi
    long n_series = 2 * k + wp + 64;
    std::vector<BigComplex> M = polyx::ml_value_lattice(y, n_series, wp);

    Real rate = xw / (2 * pi);
    Real half(mpq_class(1, 2), wp);
    QuadratureSpec spec;
    spec.osc = std::fabs(x.to_double()) / M_PI;
    auto f = [&](const Real& beta) -> BigComplex {
        Real al = tanh(beta / 2);
        Real ch = cosh(beta / 2);
        Real jac = 1 / (2 * (ch * ch));
        Real al2 = al * al;
        BigComplex num(wp);
        if (al <= half) {
            // exact tail: 2 - P - conj(P) + 2 sum_{n<k} = -2 sum_{n>=k}
            Real alp = pow(al, 2 * k);
            Real cur = alp;
            BigComplex acc(wp);
            for (long n = k; n <= n_series / 2; ++n) {
                BigComplex term = M[2 * n] * cur;
                acc = acc + term;
                if (abs(term) < ldexp(max(abs(acc), alp), -(wp + 8))) break;
                cur = cur * al2;
            }
            num = acc * (-2);
            return (num * jac) / alp;
        }
        Real sh = sin(rate * beta);
        num.re = 4 * (sh * sh);
        Real cur = al2;
        for (long n = 1; n <= k - 1; ++n) {
            num = num + (M[2 * n] * cur) * 2;
            cur = cur * al2;
        }
        return (num * jac) / pow(al, 2 * k);
    };
    BigComplex lhs = integrate_0_inf(f, spec, ctx).value;
    lhs = round_to(lhs, wp);

    BigComplex rhs(wp);
    for (long n = 0; n <= k - 1; ++n) {
        mpq_class c(2, 2 * n - 2 * k + 1);
        c.canonicalize();
        rhs = rhs + M[2 * n] * Real(c, wp);
    }
    rhs = rhs - BigComplex{Real(wp), pi} * M[2 * k - 1] * coth(xw);
    return make_residual(lhs, rhs, abs(rhs) + 1, ctx.bits);
}

// -------------------------------------------------------- tanh moments

namespace {

BigComplex tanh_pow_minus_one(const Real& v, long j, long wp) {
    // (1 + d)^j - 1 with d = tanh v - 1 = -2 e^{-2v}/(1 + e^{-2v}), exact in
    // the decaying factor so the large-v cancellation never happens.
    Real e = exp(-2 * v);
    Real d = -(2 * e) / (1 + e);
    Real acc(wp), p(1, wp);
    mpz_class binom = 1;
    for (long i = 1; i <= j; ++i) {
        binom = binom * (j - i + 1) / i;
        p = p * d;
        acc = acc + Real(binom, wp) * p;
    }
    return BigComplex(acc);
}

} // namespace

BigComplex tanh_moment(const BigComplex& s, long j, const PrecisionContext& ctx) {
    if (j < 1 || j % 2 == 0)
        throw UsageError("tanh_moment: j must be odd and >= 1");
    if (s.is_zero()) throw UsageError("tanh_moment: s = 0 is the subtracted pole");
    double sr = s.re.to_double();
    if (!(sr > -static_cast<double>(j) && sr < 1))
        throw UsageError("tanh_moment: requires -j < Re s < 1");
    long wp = ctx.work_bits();
    BigComplex sw = round_to(s, wp);
    BigComplex sm1 = sw - 1;
    QuadratureSpec spec;
    spec.osc = std::fabs(s.im.to_double());
    ITols tol{Real(wp), pow2(-(ctx.bits + 8), wp)};
    long levels = levels_for(spec, wp);

    auto f1 = [&](const Real& v) -> BigComplex {
        Real tv = tanh(v);
        return rpow(v, sm1) * pow(tv, j);
    };
    RunResult p1 = run_01(f1, spec, tol, levels, wp);

    auto f2 = [&](const Real& v) -> BigComplex {
        return rpow(v, sm1) * tanh_pow_minus_one(v, j, wp);
    };
    RunResult p2 = run_1_inf(f2, spec, tol, levels, wp);
    if ((p1.exhausted && p1.err > tol.rel * abs(p1.value)) ||
        (p2.exhausted && p2.err > tol.rel * abs(p2.value)))
        throw NonconvergenceAtMaxLevels("tanh_moment: quadrature stalled");

    return round_to(p1.value + p2.value - 1 / sw, ctx.bits + 16);
}

IdentityResidual identity_tanh_moments(const BigComplex& s, long j,
                                       const PrecisionContext& ctx) {
    if (j != 1 && j != 3)
        throw UsageError("identity_tanh_moments: closed form requires j in {1,3}");
    long wp = ctx.work_bits();
    BigComplex sw = round_to(s, wp);
    BigComplex lhs = round_to(tanh_moment(s, j, ctx), wp);

    BigComplex rhs(wp);
    Real ln2 = const_log2(wp);
    bool pole = mpsf::detail::is_real_integer(sw) && sw.re.sgn() < 0;
    if (!pole) {
        BigComplex g = (j == 1)
                           ? mpsf::detail::eta_at(sw, wp)
                           : mpsf::detail::eta_at(sw - 2, wp) * 2 +
                                 mpsf::detail::eta_at(sw, wp);
        BigComplex pre = cexp((1 - sw) * ln2); // 2^{1-s}
        rhs = -(pre * mpsf::detail::gamma_at(sw, wp) * g);
    } else {
        // s = -n: the gamma pole is cancelled by a zero of the eta
        // combination; limit = -2^{1+n} ((-1)^n/n!) g'(-n).
        long n = -sw.re.to_long();
        BigComplex gp = (j == 1)
                            ? mpsf::detail::eta_prime_at(sw, wp)
                            : mpsf::detail::eta_prime_at(sw - 2, wp) * 2 +
                                  mpsf::detail::eta_prime_at(sw, wp);
        // verify the combination really vanishes; otherwise the input sits on
        // a genuine pole of the closed form
        BigComplex g0 = (j == 1)
                            ? mpsf::detail::eta_at(sw, wp)
                            : mpsf::detail::eta_at(sw - 2, wp) * 2 +
                                  mpsf::detail::eta_at(sw, wp);
        if (!(abs(g0) < ldexp(abs(gp) + 1, -(ctx.bits / 2))))
            throw PoleArgument("identity_tanh_moments: closed form has a pole at s = " +
                               std::to_string(-n));
        mpz_class fact = 1;
        for (long i = 2; i <= n; ++i) fact *= i;
        mpz_class two_pow = mpz_class(1) << (n + 1);
        Real coef = Real(two_pow, wp) / Real(fact, wp);
        if (n % 2 == 0) coef = -coef;
        rhs = gp * coef;
    }
    return make_residual(lhs, rhs, abs(rhs) + abs(lhs) + 1, ctx.bits);
}

} // namespace zetacrit::quadid
