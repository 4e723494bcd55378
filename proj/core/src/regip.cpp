#include "zetacrit/regip.hpp"

#include <cmath>

#include "zetacrit/mpsf.hpp"
#include "zetacrit/quadid.hpp"

namespace zetacrit::regip {

InnerProductTable::InnerProductTable(std::size_t size) {
    moments_.reserve(size);
    for (std::size_t m = 0; m < size; ++m)
        moments_.push_back(mpsf::eta_neg_odd(static_cast<long>(m)));
}

const mpq_class& InnerProductTable::moment(std::size_t m) const {
    if (m >= moments_.size())
        throw UsageError("InnerProductTable: moment index out of range");
    return moments_[m];
}

mpq_class inner(const polyx::RationalPoly& p, const polyx::RationalPoly& q) {
    polyx::RationalPoly prod = p * q;
    if (prod.is_zero()) return mpq_class(0);
    InnerProductTable table(prod.degree() + 1);
    mpq_class acc = 0;
    for (long n = 0; n <= prod.degree(); ++n)
        acc += prod.coeff(n) * table.moment(n);
    return acc;
}

BigComplex inner_integral(const polyx::RationalPoly& p,
                          const polyx::RationalPoly& q,
                          const PrecisionContext& ctx) {
    ctx.validate();
    if (p.degree() > 20 || q.degree() > 20)
        throw UsageError("inner_integral: degree must be <= 20");
    long wp = ctx.work_bits();
    Real pi = const_pi(wp);
    auto f = [&](const Real& w) -> BigComplex {
        Real arg = -(w * w);
        return BigComplex((p.eval(arg) * q.eval(arg)) * (w / sinh(pi * w)));
    };
    quadid::QuadratureSpec spec;
    try {
        return quadid::integrate_0_inf(f, spec, ctx).value;
    } catch (const NonconvergenceAtMaxLevels& e) {
        throw QuadratureNonconvergence(e.what());
    }
}

BigComplex fs_functional(const BigComplex& s, const polyx::RationalPoly& p,
                         const PrecisionContext& ctx) {
    ctx.validate();
    if (mpsf::detail::is_real_integer(s)) {
        long n = s.re.to_long();
        if (n > 0 && n % 2 == 1)
            throw PoleArgument(
                "fs_functional: positive odd integer s is a pole of the "
                "regularization");
        if (n < 0 && (-n) % 2 == 1) {
            // every lattice point is a rational: evaluate exactly, so that
            // identities like F_{-1}(p q) = inner(p, q) hold to the digit
            long r = (-n - 1) / 2; // s = -1 - 2r
            mpq_class acc = 0;
            for (long j = 0; j <= p.degree(); ++j)
                acc += p.coeff(j) * mpsf::eta_neg_odd(r + j);
            return BigComplex(Real(acc, ctx.bits));
        }
    }
    if (p.is_zero()) return BigComplex(ctx.bits);
    long count = p.degree() + 1;
    long wp = ctx.work_bits();
    for (int attempt = 0;; ++attempt) {
        std::vector<BigComplex> lat = mpsf::eta_lattice(s, count, ctx, wp);
        BigComplex acc(wp);
        long max_exp = MPFR_EMIN_DEFAULT;
        for (long j = 0; j < count; ++j) {
            BigComplex term = lat[j] * Real(p.coeff(j), wp);
            long e = abs(term).exponent();
            if (e > max_exp) max_exp = e;
            acc = acc + term;
        }
        long lost = max_exp - abs(acc).exponent();
        if (wp - lost >= ctx.bits + 8) return round_to(acc, ctx.bits);
        if (attempt >= ctx.max_escalations)
            throw PrecisionEscalationExhausted(
                "fs_functional: cancellation left fewer than the requested "
                "bits after maximum escalation");
        wp *= 2;
    }
}

namespace {

using Grid = std::vector<std::vector<mpq_class>>;

Grid make_grid(long n) {
    return Grid(static_cast<std::size_t>(n) + 1,
                std::vector<mpq_class>(static_cast<std::size_t>(n) + 1, 0));
}

Grid conv(const Grid& a, const Grid& b, long n) {
    Grid c = make_grid(n);
    for (long i = 0; i <= n; ++i)
        for (long j = 0; j <= n; ++j) {
            if (a[i][j] == 0) continue;
            for (long k = 0; i + k <= n; ++k)
                for (long l = 0; j + l <= n; ++l)
                    c[i + k][j + l] += a[i][j] * b[k][l];
        }
    return c;
}

} // namespace

CoshKernelReport cosh_kernel_check(long order) {
    if (order < 0 || order > 24)
        throw UsageError("cosh_kernel_check: order must be in [0, 24]");
    long n = order;

    // cosh t as a series in t^2: ch[i] = 1/(2i)!
    std::vector<mpq_class> ch(n + 1);
    mpz_class fact = 1;
    for (long i = 0; i <= n; ++i) {
        if (i > 0) fact *= (2 * i - 1) * (2 * i);
        ch[i] = mpq_class(mpz_class(1), fact);
    }

    Grid prod_ch = make_grid(n); // cosh t1 cosh t2
    Grid sum_ch = make_grid(n);  // cosh t1 + cosh t2
    for (long a = 0; a <= n; ++a) {
        for (long b = 0; b <= n; ++b) prod_ch[a][b] = ch[a] * ch[b];
        sum_ch[a][0] += ch[a];
        sum_ch[0][a] += ch[a];
    }

    Grid den = conv(sum_ch, sum_ch, n); // (cosh t1 + cosh t2)^2, constant 4

    // series inverse of den, by ascending total degree
    Grid inv = make_grid(n);
    inv[0][0] = 1 / den[0][0];
    for (long g = 1; g <= 2 * n; ++g) {
        for (long a = std::max(0L, g - n); a <= std::min(n, g); ++a) {
            long b = g - a;
            mpq_class s = 0;
            for (long i = 0; i <= a; ++i)
                for (long j = 0; j <= b; ++j) {
                    if (i == 0 && j == 0) continue;
                    if (den[i][j] == 0) continue;
                    s += den[i][j] * inv[a - i][b - j];
                }
            inv[a][b] = -s / den[0][0];
        }
    }

    Grid numer = prod_ch; // 1 + cosh t1 cosh t2
    numer[0][0] += 1;
    Grid rhs = conv(numer, inv, n);

    CoshKernelReport rep;
    rep.order = order;
    InnerProductTable table(static_cast<std::size_t>(order) + 1);

    // constant term forces the normalization: moment(0) = prefactor * rhs_00
    rep.prefactor = table.moment(0) / rhs[0][0];

    mpz_class f2k = 1; // (2k)!
    for (long k = 0; k <= n; ++k) {
        if (k > 0) f2k *= (2 * k - 1) * (2 * k);
        mpz_class f2m = 1;
        for (long m = 0; k + m <= n; ++m) {
            if (m > 0) f2m *= (2 * m - 1) * (2 * m);
            mpq_class lhs =
                table.moment(k + m) / mpq_class(f2k * f2m);
            ++rep.entries_checked;
            if (lhs != rep.prefactor * rhs[k][m] &&
                rep.first_mismatch_k < 0) {
                rep.first_mismatch_k = k;
                rep.first_mismatch_m = m;
            }
        }
    }
    rep.all_match = rep.first_mismatch_k < 0;
    return rep;
}

} // namespace zetacrit::regip
