#include "doctest.h"

#include "zetacrit/polyx.hpp"

using namespace zetacrit;
using namespace zetacrit::polyx;

namespace {

RationalPoly P(std::vector<mpq_class> c) { return RationalPoly(std::move(c)); }

mpq_class q(long n, long d) {
    mpq_class r(n, d);
    r.canonicalize();
    return r;
}

} // namespace

TEST_CASE("ml polynomials: first members and structure") {
    CHECK(ml_poly(0) == P({1}));
    CHECK(ml_poly(1) == P({0, 2}));
    CHECK(ml_poly(2) == P({0, 0, 2}));
    CHECK(ml_poly(3) == P({0, q(2, 3), 0, q(4, 3)}));
    for (long n = 0; n <= 20; ++n) {
        auto m = ml_poly(n);
        CHECK(m.degree() == n);
        // parity: only every other coefficient can be nonzero
        for (long j = 0; j <= n; ++j)
            if ((n - j) % 2 == 1) CHECK(m.coeff(j) == 0);
    }
}

TEST_CASE("q polynomials: published low-order members") {
    CHECK(q_poly(0) == P({1}));
    CHECK(q_poly(1) == P({1, 2}));
    CHECK(q_poly(2) == P({1, q(10, 3), q(2, 3)}));
    CHECK(q_poly(3) == P({1, q(196, 45), q(14, 9), q(4, 45)}));
}

TEST_CASE("q polynomials: leading coefficient, endpoint values, degree") {
    mpz_class fact = 1;
    for (long k = 0; k <= 40; ++k) {
        if (k >= 1) fact *= (2 * k - 1) * (2 * k);
        auto Q = q_poly(k);
        CHECK(Q.degree() == k);
        CHECK(Q.coeff(0) == 1);
        CHECK(Q.eval(mpq_class(1)) == 2 * k + 1);
        mpq_class lead(mpz_class(1) << (2 * k), fact);
        lead.canonicalize();
        CHECK(Q.leading() == lead);
    }
}

TEST_CASE("q polynomials: three-term recursion holds exactly") {
    for (long k = 1; k <= 25; ++k) {
        RationalPoly lhs = P({mpq_class(2 * k + 1), q(2, 2 * k + 1)}) * q_poly(k);
        RationalPoly rhs = mpq_class(k + 1) * q_poly(k + 1) +
                           mpq_class(k) * (k >= 1 ? q_poly(k - 1) : RationalPoly());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("dilatation expansion data and exact identity") {
    auto d0 = dilatation_expansion(0);
    CHECK(d0.scale == 0);
    CHECK(d0.weights.empty());

    auto d1 = dilatation_expansion(1);
    CHECK(d1.scale == 1);
    REQUIRE(d1.weights.size() == 1);
    CHECK(d1.weights[0] == 1);

    auto d4 = dilatation_expansion(4);
    REQUIRE(d4.weights.size() == 4);
    CHECK(d4.weights[0] == q(9, 3));
    CHECK(d4.weights[1] == q(9, 15));
    CHECK(d4.weights[2] == q(9, 35));
    CHECK(d4.weights[3] == q(9, 63));

    // constructor re-verifies; just exercise a larger index
    CHECK(dilatation_expansion(12).weights.size() == 12);
}

TEST_CASE("ml identity report is clean through n = 16") {
    auto rep = ml_identities_check(16);
    CHECK(rep.all_ok);
    for (long n = 1; n <= 16; ++n) CHECK(rep.derivative_ok[n]);
    for (long n = 0; n <= 16; ++n) CHECK(rep.odd_sum_ok[n]);
}

TEST_CASE("series expansion reproduces the polynomial families") {
    auto qs = series_expand(NamedSeries::QGenerating, 8);
    REQUIRE(qs.coeffs.size() == 9);
    for (long k = 0; k <= 8; ++k) CHECK(qs.coeffs[k] == q_poly(k));

    auto ms = series_expand("ML-generating", 9);
    for (long n = 0; n <= 9; ++n) CHECK(ms.coeffs[n] == ml_poly(n));
}

TEST_CASE("series expansion of the ratio family") {
    auto rs = series_expand(NamedSeries::RGenerating, 8);
    CHECK(rs.coeffs[0] == P({2}));
    CHECK(rs.coeffs[1] == P({q(8, 3), -2}));
    CHECK(rs.coeffs[3] ==
          P({q(352, 105), q(-88, 15), q(32, 9), q(-34, 45)}));
    mpq_class partial = 0;
    for (long n = 0; n <= 8; ++n) {
        partial += q(1, 2 * n + 1);
        CHECK(rs.coeffs[n].eval(mpq_class(1)) == q(2, 2 * n + 1));
        CHECK(rs.coeffs[n].eval(mpq_class(0)) == 2 * partial);
        CHECK(rs.coeffs[n].degree() == n);
    }
}

TEST_CASE("generating series satisfies its second-order equation") {
    long N = 12;
    auto f = series_expand(NamedSeries::QGenerating, N).coeffs;
    // first and second t-derivatives as coefficient lists
    std::vector<RationalPoly> f1(N + 1), f2(N + 1);
    for (long n = 0; n + 1 <= N; ++n) f1[n] = mpq_class(n + 1) * f[n + 1];
    for (long n = 0; n + 2 <= N; ++n)
        f2[n] = mpq_class((n + 1) * (n + 2)) * f[n + 2];
    auto at = [](const std::vector<RationalPoly>& s, long n) {
        return (n >= 0 && n < static_cast<long>(s.size())) ? s[n] : RationalPoly();
    };
    // t(t-1)^2 f'' + (1/2)(t-1)(7t-1) f' + (1/2)(3t-1) f - x f
    for (long n = 0; n <= N - 1; ++n) {
        RationalPoly res = at(f2, n - 3) - mpq_class(2) * at(f2, n - 2) + at(f2, n - 1);
        res = res + q(7, 2) * at(f1, n - 2) - mpq_class(4) * at(f1, n - 1) +
              q(1, 2) * at(f1, n);
        res = res + q(3, 2) * at(f, n - 1) - q(1, 2) * at(f, n);
        res = res - at(f, n).shift_up(1);
        CHECK(res.is_zero());
    }
}

TEST_CASE("series name parsing") {
    CHECK(parse_series_name("Q-generating") == NamedSeries::QGenerating);
    CHECK_THROWS_AS(parse_series_name("cosh-generating"), UnknownSeriesName);
    CHECK_THROWS_AS(series_expand("nope", 3), UnknownSeriesName);
}

TEST_CASE("polynomial evaluation at floating arguments") {
    auto Q3 = q_poly(3);
    Real x(320);
    mpfr_set_d(x.raw(), 0.25, MPFR_RNDN);
    // exact rational evaluation vs Horner in floating arithmetic
    mpq_class wantq = Q3.eval(q(1, 4));
    Real want(wantq, 320);
    Real got = Q3.eval(x);
    CHECK(abs(got - want).to_double() < 1e-90);

    BigComplex z{Real(1, 320), Real(2, 320)};
    BigComplex gz = Q3.eval(z);
    CHECK(gz.is_finite());
}
