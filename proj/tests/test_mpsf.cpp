#include "doctest.h"

#include "zetacrit/mpsf.hpp"

#include <mpfr.h>

using namespace zetacrit;
using namespace zetacrit::mpsf;

namespace {

PrecisionContext ctx256{256, 1e-60, 3};

BigComplex at(double re, double im, long prec = 320) {
    Real r(prec), i(prec);
    mpfr_set_d(r.raw(), re, MPFR_RNDN);
    mpfr_set_d(i.raw(), im, MPFR_RNDN);
    return {r, i};
}

double rel_err(const BigComplex& got, const BigComplex& want) {
    Real d = abs(got - want);
    Real w = abs(want);
    if (w.is_zero()) return d.to_double();
    return (d / w).to_double();
}

Real mpfr_zeta_oracle(const Real& x, long prec) {
    Real r(prec);
    mpfr_zeta(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

} // namespace

TEST_CASE("Bernoulli numbers, exact rationals") {
    CHECK(bernoulli(0) == mpq_class(1));
    CHECK(bernoulli(1) == mpq_class(-1, 2));
    CHECK(bernoulli(2) == mpq_class(1, 6));
    CHECK(bernoulli(4) == mpq_class(-1, 30));
    CHECK(bernoulli(12) == mpq_class(-691, 2730));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(17) == 0);
}

TEST_CASE("eta at negative odd integers, exact rationals") {
    CHECK(eta_neg_odd(0) == mpq_class(1, 4));   // eta(-1)
    CHECK(eta_neg_odd(1) == mpq_class(-1, 8));  // eta(-3)
    CHECK(eta_neg_odd(2) == mpq_class(1, 4));   // eta(-5)
    CHECK(eta_neg_odd(3) == mpq_class(-17, 16)); // eta(-7)

    // Numeric evaluator agrees with the exact values.
    for (unsigned long m = 0; m <= 5; ++m) {
        BigComplex s(-1 - 2 * static_cast<long>(m), 320);
        BigComplex want(Real(eta_neg_odd(m), 320));
        CHECK(rel_err(eta(s, ctx256), want) < 1e-70);
    }
}

TEST_CASE("eta closed-form points") {
    long p = 320;
    // eta(1) = log 2, eta(2) = pi^2/12, eta(0) = 1/2
    CHECK(rel_err(eta(BigComplex(1, p), ctx256), BigComplex(const_log2(p))) < 1e-70);
    Real pi = const_pi(p);
    CHECK(rel_err(eta(BigComplex(2, p), ctx256), BigComplex(pi * pi / 12)) < 1e-70);
    CHECK(rel_err(eta(BigComplex(0, p), ctx256), BigComplex(Real(mpq_class(1, 2), p))) < 1e-70);
}

TEST_CASE("eta equals (1-2^{1-s}) zeta on the real axis") {
    for (double x : {-3.5, -0.7, 0.3, 2.5, 7.0}) {
        BigComplex s = at(x, 0.0);
        Real zr = mpfr_zeta_oracle(s.re, 320);
        BigComplex fac = detail::one_minus_two_pow(1 - s, 320);
        BigComplex want = fac * zr;
        CHECK(rel_err(eta(s, ctx256), want) < 1e-70);
    }
}

TEST_CASE("eta trivial zeros are exact") {
    for (long k : {-2L, -4L, -10L, -60L}) {
        BigComplex v = eta(BigComplex(k, 320), ctx256);
        CHECK(v.re.is_zero());
        CHECK(v.im.is_zero());
    }
    CHECK(!eta(BigComplex(-3, 320), ctx256).re.is_zero());
}

TEST_CASE("eta reflection formula consistency off the axis") {
    // For Re s > -1/2 both sides come from independent code paths: the left
    // side is the direct series, the right side is assembled from gamma,
    // sin, and the series at 1-s.
    for (auto [x, y] : {std::pair{-0.3, 2.0}, {0.1, -5.0}, {0.45, 14.0}}) {
        BigComplex s = at(x, y);
        BigComplex lhs = eta(s, ctx256);
        long wp = 320;
        Real ln2 = const_log2(wp);
        Real pi = const_pi(wp);
        BigComplex c1 = cexp((1 - s) * ln2);
        BigComplex c2 = cexp(s * ln2);
        BigComplex G = (1 - c1) * c2 * rpow(pi, s - 1) * csin(s * (pi / 2)) *
                       gamma_fn(1 - s, ctx256) / (1 - c2);
        BigComplex rhs = G * eta(1 - s, ctx256);
        CHECK(rel_err(lhs, rhs) < 1e-68);
    }
}

TEST_CASE("eta Schwarz reflection") {
    for (auto [x, y] : {std::pair{0.3, 5.0}, {-2.7, 1.5}, {1.5, 22.0}}) {
        BigComplex s = at(x, y);
        BigComplex a = eta(conj(s), ctx256);
        BigComplex b = conj(eta(s, ctx256));
        CHECK(rel_err(a, b) < 1e-72);
    }
}

TEST_CASE("eta stays usable at a point where it nearly vanishes") {
    // 30 correct digits of the smallest positive ordinate where eta vanishes
    // on the critical line.
    long p = 320;
    Real t = Real::from_string("14.1347251417346937904572519836", p);
    BigComplex s{Real(mpq_class(1, 2), p), t};
    BigComplex v = eta(s, ctx256);
    CHECK(abs(v).to_double() < 1e-25);
    CHECK(abs(v).to_double() > 0.0);
}

TEST_CASE("zeta simple values and pole handling") {
    long p = 320;
    Real pi = const_pi(p);
    CHECK(rel_err(zeta(BigComplex(2, p), ctx256), BigComplex(pi * pi / 6)) < 1e-70);
    CHECK(rel_err(zeta(BigComplex(-1, p), ctx256),
                  BigComplex(Real(mpq_class(-1, 12), p))) < 1e-70);
    CHECK_THROWS_AS(zeta(BigComplex(1, p), ctx256), PoleAtOne);

    // 1 - 2^{1-s} vanishes on the line Re s = 1 at s = 1 + 2 pi i k/log 2.
    Real t = 2 * const_pi(p) / const_log2(p);
    CHECK_THROWS_AS(zeta({Real(1, p), t}, ctx256), EtaFactorZero);
}

TEST_CASE("gamma matches libmpfr on the real axis") {
    for (double x : {0.25, 1.0, 4.5, 23.0, -2.5}) {
        BigComplex z = at(x, 0.0);
        Real want(320);
        mpfr_gamma(want.raw(), z.re.raw(), MPFR_RNDN);
        CHECK(rel_err(gamma_fn(z, ctx256), BigComplex(want)) < 1e-70);
    }
}

TEST_CASE("gamma recurrence, reflection, conjugate pair") {
    BigComplex z = at(0.3, 7.0);
    CHECK(rel_err(gamma_fn(z + 1, ctx256), z * gamma_fn(z, ctx256)) < 1e-70);

    long p = 320;
    Real pi = const_pi(p);
    BigComplex lhs = gamma_fn(z, ctx256) * gamma_fn(1 - z, ctx256);
    BigComplex rhs = BigComplex(pi) / csin(BigComplex(pi) * z);
    CHECK(rel_err(lhs, rhs) < 1e-68);

    // gamma(1+i) gamma(1-i) = pi/sinh(pi)
    BigComplex g = gamma_fn(at(1.0, 1.0), ctx256) * gamma_fn(at(1.0, -1.0), ctx256);
    CHECK(rel_err(g, BigComplex(pi / sinh(pi))) < 1e-70);

    CHECK_THROWS_AS(gamma_fn(BigComplex(0, p), ctx256), PoleAtNonpositiveInteger);
    CHECK_THROWS_AS(gamma_fn(BigComplex(-3, p), ctx256), PoleAtNonpositiveInteger);
}

TEST_CASE("digamma against libmpfr, recurrence, and psi(1)") {
    for (double x : {0.25, 1.0, 4.5, 23.0, -2.5}) {
        BigComplex z = at(x, 0.0);
        Real want(320);
        mpfr_digamma(want.raw(), z.re.raw(), MPFR_RNDN);
        CHECK(rel_err(digamma(z, ctx256), BigComplex(want)) < 1e-68);
    }
    BigComplex z = at(-0.4, 3.0);
    BigComplex lhs = digamma(z + 1, ctx256);
    BigComplex rhs = digamma(z, ctx256) + 1 / z;
    CHECK(rel_err(lhs, rhs) < 1e-68);

    long p = 320;
    CHECK(rel_err(digamma(BigComplex(1, p), ctx256),
                  BigComplex(-const_euler(p))) < 1e-70);
    CHECK_THROWS_AS(digamma(BigComplex(-7, p), ctx256), PoleAtNonpositiveInteger);
}

TEST_CASE("eta derivative reference values") {
    long p = 320;
    Real pi = const_pi(p);
    Real ln2 = const_log2(p);

    // eta'(0) = -log 2 + (1/2) log(2 pi)
    BigComplex want0(-ln2 + log(2 * pi) / 2);
    CHECK(rel_err(eta_prime(BigComplex(0, p), ctx256), want0) < 1e-70);

    // eta'(-2) = 7 zeta(3)/(4 pi^2)
    Real z3(p);
    {
        Real three(3, p);
        mpfr_zeta(z3.raw(), three.raw(), MPFR_RNDN);
    }
    BigComplex want2(7 * z3 / (4 * (pi * pi)));
    CHECK(rel_err(eta_prime(BigComplex(-2, p), ctx256), want2) < 1e-68);
}

TEST_CASE("eta derivative agrees with a central difference") {
    // h = 2^-80 at 400-bit working precision leaves ~2^-160 truncation error,
    // far below the 1e-30 comparison threshold.
    PrecisionContext hi{512, 1e-100, 3};
    for (auto [x, y] : {std::pair{2.0, 0.0}, {0.5, 3.0}, {-1.6, 1.0}}) {
        BigComplex s = at(x, y, 640);
        Real h = pow2(-80, 640);
        BigComplex up = eta(s + BigComplex(h), hi);
        BigComplex dn = eta(s - BigComplex(h), hi);
        BigComplex fd = (up - dn) / BigComplex(2 * h);
        CHECK(rel_err(eta_prime(s, ctx256), fd) < 1e-40);
    }
}

TEST_CASE("eta lattice matches pointwise evaluation") {
    for (auto [x, y] : {std::pair{0.3, 0.0}, {-0.7, 0.0}, {0.5, 3.0}, {2.5, -1.0}}) {
        BigComplex s = at(x, y);
        auto lat = eta_lattice(s, 8, ctx256);
        REQUIRE(lat.size() == 8);
        for (long j = 0; j < 8; ++j) {
            BigComplex want = eta(s - 2 * j, ctx256);
            if (want.is_zero())
                CHECK(lat[j].is_zero());
            else
                CHECK(rel_err(lat[j], want) < 1e-68);
        }
    }
}

TEST_CASE("eta lattice zeros land exactly on trivial zeros") {
    BigComplex s(4, 320);
    auto lat = eta_lattice(s, 6, ctx256);
    // arguments 4, 2, 0, -2, -4, -6
    CHECK(!lat[0].is_zero());
    CHECK(!lat[2].is_zero());
    CHECK(lat[3].is_zero());
    CHECK(lat[4].is_zero());
    CHECK(lat[5].is_zero());
}

TEST_CASE("eta derivative lattice matches pointwise evaluation") {
    for (auto [x, y] : {std::pair{0.3, 0.0}, {0.5, 3.0}, {-1.2, 0.5}}) {
        BigComplex s = at(x, y);
        auto lat = eta_prime_lattice(s, 6, ctx256);
        for (long j = 0; j < 6; ++j) {
            BigComplex want = eta_prime(s - 2 * j, ctx256);
            CHECK(rel_err(lat[j], want) < 1e-66);
        }
    }
}

TEST_CASE("requested precision is honored and monotone") {
    BigComplex s = at(0.3, 5.0, 512);
    PrecisionContext lo{128, 1e-25, 3};
    PrecisionContext hi{384, 1e-80, 3};
    BigComplex a = eta(s, lo);
    BigComplex b = eta(s, hi);
    CHECK(a.re.prec() == 128);
    CHECK(b.re.prec() == 384);
    CHECK(rel_err(a, b) < 1e-35);
}

TEST_CASE("precision context validation") {
    CHECK_THROWS_AS(PrecisionContext(32, 1e-5), UsageError);
    CHECK_THROWS_AS(PrecisionContext(128, 0.0), UsageError);
    CHECK_THROWS_AS(PrecisionContext(128, 1e-60), UsageError);
    CHECK_NOTHROW(PrecisionContext(128, 1e-30));
}
