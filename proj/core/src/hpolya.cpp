#include "zetacrit/hpolya.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zetacrit/errors.hpp"
#include "zetacrit/mpsf.hpp"
#include "zetacrit/quadid.hpp"
#include "zetacrit/seqgen.hpp"
#include "zetacrit/spectrum.hpp"

namespace zetacrit::hpolya {

namespace {

bool is_real_even_integer(const BigComplex& s) {
    return mpsf::detail::is_real_integer(s) && s.re.to_long() % 2 == 0;
}

// The closed two-integral solution form of the kernel, with the worked
// source g(x) = x / (16 cosh^2(x/2)).
quadid::QuadResult genp_quad(const Real& t, const Real& p,
                             const PrecisionContext& ctx) {
    long wp = ctx.work_bits();
    Real tw = round_to(t, wp);
    Real pw = round_to(p, wp);
    Real tH = log((1 + sqrt(tw)) / (1 - sqrt(tw)));
    Real pH = log((1 + sqrt(pw)) / (1 - sqrt(pw)));
    Real ct = cosh(tH / 2), st = sinh(tH / 2);
    Real cp = cosh(pH / 2), sp = sinh(pH / 2);
    Real pref = ((((ct * ct) * ct) * ((cp * cp) * cp)) * 4) / (st * sp);
    auto g = [&](const Real& x) -> Real {
        Real c = cosh(x / 2);
        return x / ((c * c) * 16);
    };
    quadid::QuadratureSpec spec;
    auto f1 = [&](const Real& x) -> BigComplex {
        Real c = cosh((x * tH) / 2);
        return BigComplex(((g(x * pH) * tH) * x) / (c * c));
    };
    auto f2 = [&](const Real& x) -> BigComplex {
        Real c = cosh((x * pH) / 2);
        return BigComplex(((g(x * tH) * pH) * x) / (c * c));
    };
    Real zero(0, wp), one(1, wp);
    quadid::QuadResult q1 = quadid::integrate_finite(f1, zero, one, spec, ctx);
    quadid::QuadResult q2 = quadid::integrate_finite(f2, zero, one, spec, ctx);
    return {(q1.value + q2.value) * pref, (q1.err_est + q2.err_est) * pref};
}

Real real_from_double(double x, long prec) {
    Real r(prec);
    mpfr_set_d(r.raw(), x, MPFR_RNDN);
    return r;
}

} // namespace

RFamily r_family(long order) {
    if (order < 0) throw UsageError("r_family: order must be >= 0");
    auto ps = polyx::series_expand(polyx::NamedSeries::RGenerating, order);
    RFamily out;
    out.order = order;
    out.polys = std::move(ps.coeffs);
    return out;
}

PMatrix p_matrix(long N, const mpq_class& nu) {
    if (N < 1) throw UsageError("p_matrix: N must be >= 1");
    if (nu < 0) throw UsageError("p_matrix: nu must be >= 0");
    RFamily fam = r_family(N - 1);
    PMatrix P;
    P.N = N;
    P.nu = nu;
    P.entries.assign(N, std::vector<mpq_class>(N, mpq_class(0)));
    for (long n = 1; n <= N; ++n) {
        for (long m = n; m <= N; ++m) {
            polyx::RationalPoly prod = fam.polys[n - 1] * fam.polys[m - 1];
            mpq_class acc(0);
            for (long d = 0; d <= prod.degree(); ++d) {
                mpq_class term = prod.coeff(d);
                mpq_class den = nu;
                den *= 2;
                den += 2 * d + 3;
                term /= den;
                acc += term;
            }
            acc /= 2;
            P.entries[n - 1][m - 1] = acc;
            P.entries[m - 1][n - 1] = acc;
        }
    }
    return P;
}

HermitianReport hermitian_check(long N, const mpq_class& nu) {
    if (N < 2) throw UsageError("hermitian_check: N must be >= 2");
    if (nu < 0) throw UsageError("hermitian_check: nu must be >= 0");
    PMatrix P = p_matrix(N, nu);
    auto A = spectrum::build(spectrum::MatrixKind::A, N);
    std::vector<std::vector<mpq_class>> PA(N, std::vector<mpq_class>(N, mpq_class(0)));
    for (long i = 1; i <= N; ++i) {
        for (long j = 1; j <= N; ++j) {
            mpq_class acc(0);
            for (long k = 1; k <= j; ++k) { // A is upper triangular
                mpq_class term = P.entries[i - 1][k - 1];
                term *= A.entry_con(k, j);
                acc += term;
            }
            PA[i - 1][j - 1] = acc;
        }
    }
    HermitianReport rep;
    rep.N = N;
    rep.nu = nu;
    rep.exact = true;
    rep.max_defect = 0;
    for (long i = 1; i <= N; ++i) {
        for (long j = 1; j <= N; ++j) {
            mpq_class d = PA[i - 1][j - 1];
            d += PA[j - 1][i - 1];
            mpq_class corr = P.entries[i - 1][j - 1];
            corr *= nu;
            corr /= 2;
            d -= corr;
            mpq_class f(1, (2 * i - 1) * (2 * j - 1));
            f /= 2;
            d += f;
            if (d != 0) {
                rep.exact = false;
                mpq_class ad = abs(d);
                if (ad > rep.max_defect) rep.max_defect = ad;
            }
        }
    }
    return rep;
}

AnnihilatorReport annihilator_sum(const Real& z, const BigComplex& s, long N,
                                  const PrecisionContext& ctx) {
    ctx.validate();
    if (!(z > 0) || z > 1) throw UsageError("annihilator_sum: requires 0 < z <= 1");
    if (N < 1) throw UsageError("annihilator_sum: N must be >= 1");
    if (!(s.re < 2)) throw UsageError("annihilator_sum: requires Re s < 2");
    long wp = ctx.work_bits();
    auto bundle = seqgen::u_sequence(s, N + 1, ctx); // v_0..v_N
    RFamily fam = r_family(N);
    Real zw = round_to(z, wp);

    AnnihilatorReport rep;
    rep.s = round_to(s, ctx.bits);
    rep.z = round_to(z, ctx.bits);
    rep.partial.reserve(N + 1);
    BigComplex acc(wp);
    for (long n = 0; n <= N; ++n) {
        Real rn = fam.polys[n].eval(zw);
        acc = acc + round_to(bundle.v[n], wp) * rn;
        rep.partial.push_back(round_to(acc, ctx.bits));
    }

    BigComplex sw = round_to(s, wp);
    Real pi = const_pi(wp);
    BigComplex zpow = rpow(zw, -((sw + 1) / 2));
    if (is_real_even_integer(s)) {
        // s eta(s) = 0 exactly here (either factor); the limiting integral is
        // resolved through d/ds [s eta(s)] = eta + s eta'.
        rep.series_limit = BigComplex(ctx.bits);
        BigComplex eta = mpsf::detail::eta_at(sw, wp);
        BigComplex etap = mpsf::detail::eta_prime_at(sw, wp);
        BigComplex ival = (((eta + sw * etap) * 8) * rpow(pi, -sw + 1)) * zpow /
                          ccos(sw * (pi / 2));
        rep.integral_value = round_to(ival, ctx.bits);
    } else {
        BigComplex eta = mpsf::detail::eta_at(sw, wp);
        rep.series_limit = round_to(((sw * eta) * 2) * zpow, ctx.bits);
        BigComplex ival = (((sw * eta) * 4) * rpow(pi, -sw + 2)) * zpow /
                          csin(sw * (pi / 2));
        rep.integral_value = round_to(ival, ctx.bits);
    }
    return rep;
}

BigComplex genp_kernel_eval(double t, double p, const PrecisionContext& ctx) {
    ctx.validate();
    if (!(t > 0) || !(t < 1) || !(p > 0) || !(p < 1))
        throw UsageError("genp_kernel_eval: requires 0 < t, p < 1");
    long wp = ctx.work_bits();
    Real tw = real_from_double(t, wp);
    Real pw = real_from_double(p, wp);
    quadid::QuadResult q = genp_quad(tw, pw, ctx);

    // independent route: the truncated double series over exact entries
    double mx = std::max(t, p);
    long NT = static_cast<long>(60.0 / -std::log(mx)) + 2;
    NT = std::clamp(NT, 8L, 48L);
    PMatrix P = p_matrix(NT, mpq_class(0));
    std::vector<Real> tpow, ppow;
    tpow.reserve(NT);
    ppow.reserve(NT);
    Real one(1, wp);
    tpow.push_back(one);
    ppow.push_back(one);
    for (long i = 1; i < NT; ++i) {
        tpow.push_back(tpow.back() * tw);
        ppow.push_back(ppow.back() * pw);
    }
    Real series(0, wp);
    for (long i = 0; i < NT; ++i) {
        Real row(0, wp);
        for (long j = 0; j < NT; ++j)
            row = row + Real(P.entries[i][j], wp) * ppow[j];
        series = series + tpow[i] * row;
    }
    // all entries are below P_11 = 2/3 < 1, so the discarded rows/columns sum
    // below 2 mx^NT / ((1-t)(1-p))
    double tail_d = 2.0 * std::pow(mx, double(NT)) / ((1.0 - t) * (1.0 - p));
    Real tol = real_from_double(tail_d, wp) + q.err_est +
               ldexp(max(Real(1, wp), abs(q.value)), -(ctx.bits / 2));
    if (abs(q.value - BigComplex(series)) > tol)
        throw MethodDisagreement(
            "genp_kernel_eval: quadrature and series routes disagree");
    return round_to(q.value, ctx.bits);
}

Real pde_residual(double t, double p, const PrecisionContext& ctx) {
    ctx.validate();
    double h = std::ldexp(1.0, -20);
    if (!(t - h > 0) || !(t + h < 1) || !(p - h > 0) || !(p + h < 1))
        throw UsageError("pde_residual: (t, p) too close to the domain edge");
    long wp = ctx.work_bits();
    auto kernel = [&](double a, double b) -> BigComplex {
        return genp_quad(real_from_double(a, wp), real_from_double(b, wp), ctx)
            .value;
    };
    BigComplex Pc = kernel(t, p);
    Real two_h = real_from_double(2.0 * h, wp);
    BigComplex Pt = (kernel(t + h, p) - kernel(t - h, p)) / two_h;
    BigComplex Pp = (kernel(t, p + h) - kernel(t, p - h)) / two_h;

    Real tw = real_from_double(t, wp);
    Real pw = real_from_double(p, wp);
    Real Lt = log((1 + sqrt(tw)) / (1 - sqrt(tw)));
    Real Lp = log((1 + sqrt(pw)) / (1 - sqrt(pw)));
    Real a_t = (((tw * 3 - 1) / sqrt(tw)) * Lt - 1) / 8;
    Real a_p = (((pw * 3 - 1) / sqrt(pw)) * Lp - 1) / 8;
    Real b_t = ((sqrt(tw) * (tw - 1)) * Lt) / 4;
    Real b_p = ((sqrt(pw) * (pw - 1)) * Lp) / 4;
    BigComplex lhs = Pc * (a_t + a_p) + Pt * b_t + Pp * b_p;
    Real rhs = -(((Lt * Lp) / sqrt(tw * pw)) / 8);
    return round_to(abs(lhs - BigComplex(rhs)), ctx.bits);
}

} // namespace zetacrit::hpolya
